#include "matchbench/generators.hpp"

#include <stdexcept>
#include <string>

#include "matchbench/rng.hpp"

namespace matchbench {

Instance gen_fact_instance(std::size_t k, std::size_t z) {
    if (k < 2 || k % 2 != 0) {
        throw std::invalid_argument("k must be even and >= 2, got " +
                                    std::to_string(k));
    }
    const std::size_t n = k + z;
    std::vector<double> values(n * n, 0.0);
    // 0-based translation of the 1-based pattern: diagonal a == i < k, plus
    // the band a < k/2, i in [k/2 - 1, k - 1]. The band's first column
    // coincides with the diagonal at a = k/2 - 1; that overlap is a single
    // 1-entry.
    const std::size_t half = k / 2;
    for (std::size_t a = 0; a < k; ++a) values[a * n + a] = 1.0;
    for (std::size_t a = 0; a < half; ++a) {
        for (std::size_t i = half - 1; i < k; ++i) values[a * n + i] = 1.0;
    }
    return Instance(n, std::move(values), PreferenceClass::Dichotomous);
}

Instance gen_hardness_chunked(std::size_t n, std::size_t k, double eps) {
    if (n == 0) throw std::invalid_argument("n must be >= 1");
    if (k == 0 || n % k != 0) {
        throw std::invalid_argument("k = " + std::to_string(k) +
                                    " must divide n = " + std::to_string(n));
    }
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be > 0");
    const double per_chunk_eps = eps / static_cast<double>(k);
    if (!(per_chunk_eps < 1.0)) {
        throw std::invalid_argument("eps/k must be < 1, got " +
                                    std::to_string(per_chunk_eps));
    }
    const std::size_t chunk = n / k;
    std::vector<double> values(n * n, 0.0);
    for (std::size_t c = 0; c < k; ++c) {
        const std::size_t base = c * chunk;
        values[base * n + base] = 1.0;
        for (std::size_t a = base + 1; a < base + chunk; ++a) {
            values[a * n + base] = per_chunk_eps;
        }
    }
    return Instance(n, std::move(values), PreferenceClass::Normalized);
}

Instance gen_random(std::size_t n, PreferenceClass cls, double density,
                    std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("n must be >= 1");
    if (cls == PreferenceClass::UnitRange && n < 2) {
        throw std::invalid_argument("unit_range generation requires n >= 2");
    }
    if (!(density >= 0.0 && density <= 1.0)) {
        throw std::invalid_argument("density must lie in [0,1]");
    }
    RngStream rng(seed);
    std::vector<double> values(n * n, 0.0);
    switch (cls) {
        case PreferenceClass::Dichotomous:
            for (auto& v : values) v = rng.uniform_real() < density ? 1.0 : 0.0;
            break;
        case PreferenceClass::Normalized:
            for (auto& v : values) v = rng.uniform_real();
            break;
        case PreferenceClass::UnitRange:
            for (std::size_t a = 0; a < n; ++a) {
                double* row = values.data() + a * n;
                for (;;) {
                    double lo = 1.0, hi = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        row[i] = rng.uniform_real();
                        lo = std::min(lo, row[i]);
                        hi = std::max(hi, row[i]);
                    }
                    if (hi > lo) {
                        for (std::size_t i = 0; i < n; ++i) {
                            row[i] = (row[i] - lo) / (hi - lo);
                        }
                        break;
                    }
                    // constant row: redraw
                }
            }
            break;
    }
    return Instance(n, std::move(values), cls);
}

} // namespace matchbench
