#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace dms {

using cplx = std::complex<double>;

// Thrown when an operation requires a grid-commensurate shift or boost and
// strict mode is on.
struct CommensurabilityError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when a Gaussian does not fit the grid (resolution or containment).
struct ResolutionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Uniform periodic grid on [-X/2, X/2) with n samples, n a power of two.
// Node j sits at x_j = -X/2 + j*dx, frequencies eta_k = 2*pi*k/X for
// k in {-n/2, ..., n/2-1} (single Nyquist mode at k = -n/2).
struct GridSpec {
    std::size_t n = 0;
    double extent = 0.0;

    double dx() const { return extent / static_cast<double>(n); }
    double x(std::size_t j) const { return -0.5 * extent + static_cast<double>(j) * dx(); }

    // Signed frequency of DFT bin k in [0, n).
    double freq(std::size_t k) const {
        const auto half = n / 2;
        const double kk = (k < half) ? static_cast<double>(k)
                                     : static_cast<double>(k) - static_cast<double>(n);
        return 2.0 * M_PI * kk / extent;
    }

    // Largest representable |eta| (the Nyquist magnitude pi*n/X).
    double freq_max() const { return M_PI * static_cast<double>(n) / extent; }

    std::size_t nyquist_bin() const { return n / 2; }

    bool operator==(const GridSpec&) const = default;

    static GridSpec make(std::size_t n, double extent) {
        if (n < 8 || (n & (n - 1)) != 0)
            throw std::invalid_argument("GridSpec: n must be a power of two >= 8, got " +
                                        std::to_string(n));
        if (!(extent > 0.0) || !std::isfinite(extent))
            throw std::invalid_argument("GridSpec: extent must be positive and finite");
        return GridSpec{n, extent};
    }
};

// Complex field samples on a grid. Plain value type; all operations on
// fields are free functions returning new values.
struct Field {
    GridSpec grid;
    std::vector<cplx> values;

    static Field zeros(const GridSpec& g) { return Field{g, std::vector<cplx>(g.n)}; }

    std::size_t size() const { return values.size(); }

    bool finite() const {
        for (const auto& z : values)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }
};

inline void require_valid(const Field& f, const char* where) {
    if (f.values.size() != f.grid.n)
        throw std::invalid_argument(std::string(where) + ": field size does not match grid");
    if (!f.finite())
        throw std::invalid_argument(std::string(where) + ": field has non-finite samples");
}

// Summation with a fixed index-ascending pairwise tree. Used for every
// reduction that feeds a published number, so results do not depend on
// thread count.
template <typename T>
T pairwise_sum(const T* data, std::size_t count) {
    if (count == 0) return T{};
    if (count <= 8) {
        T acc = data[0];
        for (std::size_t i = 1; i < count; ++i) acc += data[i];
        return acc;
    }
    const std::size_t half = count / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, count - half);
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
    return pairwise_sum(v.data(), v.size());
}

}  // namespace dms
