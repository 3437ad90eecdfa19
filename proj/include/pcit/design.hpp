#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pcit/rng.hpp"

namespace pcit {

enum class DesignKind { equispaced, uniform_iid };

inline const char* to_string(DesignKind d) {
    return d == DesignKind::equispaced ? "equispaced" : "uniform_iid";
}

inline DesignKind design_kind_from_string(const std::string& s) {
    if (s == "equispaced") return DesignKind::equispaced;
    if (s == "uniform_iid" || s == "uniform") return DesignKind::uniform_iid;
    throw std::invalid_argument("unknown design kind: " + s);
}

/**
 * @brief Ordered design abscissae for the simulation model.
 *
 * Values are strictly increasing and lie in (0, 1]; at least 3 points.
 * Lower-level kernel and smoothing routines accept plain spans (with ties
 * allowed), this type guards the simulation entry points.
 */
class DesignPoints {
  public:
    /// x_i = i/n, i = 1..n.
    static DesignPoints equispaced(std::size_t n) {
        require_size(n);
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = double(i + 1) / double(n);
        return DesignPoints(std::move(x));
    }

    /// n i.i.d. Uniform(0,1] values, sorted.
    static DesignPoints sorted_uniform(std::size_t n, Rng& rng) {
        require_size(n);
        std::vector<double> x(n);
        for (auto& v : x) v = 1.0 - rng.uniform();  // (0, 1]
        std::sort(x.begin(), x.end());
        return DesignPoints(std::move(x));
    }

    static DesignPoints from_values(std::vector<double> x) {
        require_size(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!(x[i] > 0.0) || !(x[i] <= 1.0))
                throw std::invalid_argument("design points must lie in (0, 1]");
            if (i > 0 && !(x[i] > x[i - 1]))
                throw std::invalid_argument("design points must be strictly increasing");
        }
        return DesignPoints(std::move(x));
    }

    std::size_t size() const { return x_.size(); }
    std::span<const double> values() const { return x_; }
    const std::vector<double>& vec() const { return x_; }

  private:
    explicit DesignPoints(std::vector<double> x) : x_(std::move(x)) {}

    static void require_size(std::size_t n) {
        if (n < 3) throw std::invalid_argument("need at least 3 design points");
    }

    std::vector<double> x_;
};

}  // namespace pcit
