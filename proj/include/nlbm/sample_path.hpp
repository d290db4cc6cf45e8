#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlbm/math/quadrature.hpp"
#include "nlbm/math/rng.hpp"

// Uniform-grid sample paths and the operations every process construction
// shares: right-continuous inversion of nondecreasing paths, excursion
// decomposition, skew coin-tossing, and the discounted path functional
// int_0^T e^{-lam t} f(X_t) dt.

namespace nlbm {

enum class PathKind {
    bm,
    reflected,
    local_time,
    subordinator,
    inverse_subordinator,
    composed
};

struct SamplePath {
    double dt = 0.0;
    std::vector<double> values;
    PathKind kind = PathKind::bm;

    std::size_t size() const { return values.size(); }
    double t(std::size_t i) const { return dt * static_cast<double>(i); }
    double horizon() const { return values.empty() ? 0.0 : t(values.size() - 1); }
    double back() const { return values.back(); }
};

inline void require_nondecreasing(const SamplePath& p, const char* who) {
    for (std::size_t i = 1; i < p.values.size(); ++i)
        if (p.values[i] < p.values[i - 1] - 1e-12)
            throw std::domain_error(std::string(who) + ": path is not nondecreasing");
}

// Right-continuous inverse inf{s : P(s) > t} of a nondecreasing path,
// evaluated on query times by binary search with linear interpolation
// inside the straddling step (exact on continuous increase, O(dt) across
// jumps, plateaus where the input jumps).
inline SamplePath invert_nondecreasing(const SamplePath& path,
                                       const std::vector<double>& query) {
    require_nondecreasing(path, "invert_nondecreasing");
    SamplePath out;
    out.kind = PathKind::inverse_subordinator;
    out.values.reserve(query.size());
    const auto& v = path.values;
    if (v.empty()) throw std::domain_error("invert_nondecreasing: empty path");
    for (double t : query) {
        if (t > v.back())
            throw range_error("invert_nondecreasing: query " + std::to_string(t) +
                              " beyond path range " + std::to_string(v.back()) +
                              "; extend the horizon");
        // first index with value > t
        std::size_t lo = 0, hi = v.size();
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (v[mid] > t)
                hi = mid;
            else
                lo = mid + 1;
        }
        if (lo == 0) {
            out.values.push_back(0.0);
            continue;
        }
        if (lo == v.size()) {  // t == v.back(); inverse sits at the end
            out.values.push_back(path.t(v.size() - 1));
            continue;
        }
        const double s0 = path.t(lo - 1), v0 = v[lo - 1], v1 = v[lo];
        const double frac = (v1 > v0) ? (t - v0) / (v1 - v0) : 1.0;
        out.values.push_back(s0 + frac * path.dt);
    }
    if (query.size() >= 2) out.dt = query[1] - query[0];
    return out;
}

// Trapezoid estimate of int_0^T e^{-lam t} f(X_t) dt over the grid.
inline double path_laplace_functional(const SamplePath& path,
                                      const std::function<double(double)>& f,
                                      double lam) {
    if (lam <= 0.0)
        throw std::domain_error("path_laplace_functional: lambda must be > 0");
    if (path.values.size() < 2)
        throw std::domain_error("path_laplace_functional: path too short");
    double acc = 0.0;
    double w_prev = f(path.values.front());  // e^{0} weight
    double decay = std::exp(-lam * path.dt);
    double expw = decay;
    for (std::size_t i = 1; i < path.values.size(); ++i) {
        const double w = expw * f(path.values[i]);
        acc += 0.5 * (w_prev + w);
        w_prev = w;
        expw *= decay;
    }
    return acc * path.dt;
}

// --- excursions ------------------------------------------------------------------

struct ExcursionInterval {
    std::size_t begin = 0;  // first grid index inside the interval
    std::size_t end = 0;    // one past the last grid index
    bool plateau = false;
    int sign = +1;
    std::size_t unit = 0;   // sign unit: plateau and its following excursion share one
};

struct ExcursionDecomposition {
    std::vector<ExcursionInterval> intervals;
};

// Maximal grid intervals with strictly positive values; exact zeros separate
// excursions. Plateau intervals must be tagged by the construction that
// knows them (sticky paths); value-thresholding is only used for zeros.
inline ExcursionDecomposition decompose_excursions(const SamplePath& path) {
    ExcursionDecomposition d;
    const auto& v = path.values;
    std::size_t i = 0;
    std::size_t unit = 0;
    while (i < v.size()) {
        if (v[i] > 0.0) {
            std::size_t j = i;
            while (j < v.size() && v[j] > 0.0) ++j;
            d.intervals.push_back({i, j, false, +1, unit++});
            i = j;
        } else {
            ++i;
        }
    }
    return d;
}

struct SkewConfig {
    double nu = 0.5;
    double eta = 1.0;
    std::uint64_t seed = 0;
};

// Independent skew coin-tossing: each sign unit draws +1 with probability nu
// from its own stream. Plateau intervals inherit the unit draw. The closed
// endpoints are the degenerate deterministic coins.
inline ExcursionDecomposition skew_signs(ExcursionDecomposition decomp, double nu,
                                         Rng& rng) {
    if (!(nu >= 0.0 && nu <= 1.0))
        throw std::domain_error("skew_signs: nu must be in [0,1]");
    std::size_t current_unit = static_cast<std::size_t>(-1);
    int current_sign = +1;
    for (auto& iv : decomp.intervals) {
        if (iv.unit != current_unit) {
            current_unit = iv.unit;
            current_sign = rng.uniform() < nu ? +1 : -1;
        }
        iv.sign = current_sign;
    }
    return decomp;
}

// Multiply path values by the interval signs (values outside intervals are
// zeros and stay untouched).
inline SamplePath apply_signs(SamplePath path, const ExcursionDecomposition& d) {
    for (const auto& iv : d.intervals) {
        if (iv.sign == -1)
            for (std::size_t i = iv.begin; i < iv.end; ++i) path.values[i] = -path.values[i];
    }
    return path;
}

}  // namespace nlbm
