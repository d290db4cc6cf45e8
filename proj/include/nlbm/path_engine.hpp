#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nlbm/levy_symbol.hpp"
#include "nlbm/math/rng.hpp"
#include "nlbm/sample_path.hpp"

// Path constructions. Convention fixed across the library: the heat
// operator is d^2/dx^2 (not half of it), the transition kernel is
// exp(-z^2/4t)/sqrt(4 pi t), so Brownian increments carry variance 2*dt.
// All closed-form identities used elsewhere (hitting transform
// e^{-sqrt(lam)|x|}, kernel Laplace pairs) assume exactly this scaling.

namespace nlbm {

inline constexpr double kBmVariancePerTime = 2.0;

// --- plain Brownian motion and the Skorokhod map ---------------------------------

inline SamplePath simulate_bm(double horizon, double dt, Rng& rng, double x0 = 0.0) {
    if (!(dt > 0.0) || !(horizon > dt))
        throw std::domain_error("simulate_bm: need 0 < dt < horizon");
    const std::size_t n = static_cast<std::size_t>(std::llround(horizon / dt));
    SamplePath p;
    p.dt = dt;
    p.kind = PathKind::bm;
    p.values.resize(n + 1);
    p.values[0] = x0;
    const double sd = std::sqrt(kBmVariancePerTime * dt);
    for (std::size_t i = 1; i <= n; ++i)
        p.values[i] = p.values[i - 1] + sd * rng.normal();
    return p;
}

// Levy/Skorokhod construction at grid resolution: B+ = B - min, local time
// gamma = -min. Exact zeros of B+ at running-minimum updates.
inline std::pair<SamplePath, SamplePath> reflect_with_local_time(const SamplePath& bm) {
    if (bm.kind != PathKind::bm)
        throw std::domain_error("reflect_with_local_time: input must be a bm path");
    if (bm.values.empty() || bm.values[0] != 0.0)
        throw std::domain_error("reflect_with_local_time: path must start at 0 "
                                "(reflection from the interior unsupported)");
    SamplePath refl, loc;
    refl.dt = loc.dt = bm.dt;
    refl.kind = PathKind::reflected;
    loc.kind = PathKind::local_time;
    refl.values.resize(bm.values.size());
    loc.values.resize(bm.values.size());
    double run_min = 0.0;
    for (std::size_t i = 0; i < bm.values.size(); ++i) {
        run_min = std::min(run_min, bm.values[i]);
        refl.values[i] = bm.values[i] - run_min;
        loc.values[i] = -run_min;
    }
    return {std::move(refl), std::move(loc)};
}

// --- subordinator with exact jump records -----------------------------------------

// Compound-Poisson approximation keeping jumps > eps at rate tail(eps), plus
// the compensation drift small_jump_mean(eps) per unit time. Jump records
// allow exact evaluation of H, of the right inverse L, and of the
// composition H(L(x)) by index bookkeeping (no nested interpolation).
class SubordinatorSim {
  public:
    SubordinatorSim(const LevySymbol& sym, double eps, Rng rng)
        : sym_(&sym),
          eps_(eps),
          rate_(sym.tail(eps)),
          drift_(sym.small_jump_mean(eps)),
          rng_(rng) {
        next_arrival_ = rng_.exponential(rate_);
    }

    // Deterministic test double: given drift, given jumps, no randomness.
    SubordinatorSim(double drift, std::vector<double> jump_times,
                    std::vector<double> jump_sizes)
        : sym_(nullptr), eps_(0.0), rate_(0.0), drift_(drift), rng_(0, 0, 0) {
        next_arrival_ = std::numeric_limits<double>::infinity();
        double level = 0.0, prev_t = 0.0;
        for (std::size_t i = 0; i < jump_times.size(); ++i) {
            if (jump_times[i] < prev_t)
                throw std::domain_error("SubordinatorSim: jump times must increase");
            level += drift_ * (jump_times[i] - prev_t);
            jt_.push_back(jump_times[i]);
            pre_.push_back(level);
            level += jump_sizes[i];
            post_.push_back(level);
            prev_t = jump_times[i];
        }
        built_s_ = std::numeric_limits<double>::infinity();
    }

    double drift() const { return drift_; }
    double rate() const { return rate_; }
    std::size_t jump_count() const { return jt_.size(); }
    double jump_time(std::size_t k) const { return jt_[k]; }
    double jump_size(std::size_t k) const { return post_[k] - pre_[k]; }

    // Generate jumps with arrival time <= s.
    void extend_to_time(double s) {
        while (next_arrival_ <= s) commit_next_jump();
        built_s_ = std::max(built_s_, s);
    }

    // Generate jumps until the level x is inside the built range of H.
    void extend_to_level(double x) {
        for (;;) {
            const double reach = last_post() + drift_ * (next_arrival_ - last_time());
            if (reach > x || !std::isfinite(next_arrival_)) break;
            commit_next_jump();
        }
    }

    // H(s): drift part plus all jumps with time <= s.
    double value(double s) {
        extend_to_time(s);
        const std::size_t k = upper_bound_time(s);
        const double base = (k == 0) ? 0.0 : post_[k - 1];
        const double t0 = (k == 0) ? 0.0 : jt_[k - 1];
        return base + drift_ * (s - t0);
    }

    // H(L(x)) for x >= 0: the post-jump level when x falls inside a jump
    // gap, x itself when the drift part covers it.
    double overshoot_end(double x) {
        if (x < 0.0) throw std::domain_error("overshoot_end: level must be >= 0");
        extend_to_level(x);
        const std::size_t k = first_gap_above(x);
        if (k < post_.size() && x >= pre_[k]) return post_[k];
        return x;
    }

    // Identifier of the segment of levels [pre_k, post_k) containing x, or
    // (npos, false) when x is drift-covered. Level-segment transitions mark
    // the zero-hits of the composed process.
    std::pair<std::size_t, bool> level_state(double x) {
        extend_to_level(x);
        const std::size_t k = first_gap_above(x);
        if (k < post_.size() && x >= pre_[k]) return {k, true};
        return {k, false};
    }

  private:
    double last_post() const { return post_.empty() ? 0.0 : post_.back(); }
    double last_time() const { return jt_.empty() ? 0.0 : jt_.back(); }

    void commit_next_jump() {
        const double t = next_arrival_;
        const double level = last_post() + drift_ * (t - last_time());
        jt_.push_back(t);
        pre_.push_back(level);
        post_.push_back(level + sym_->sample_jump(eps_, rng_));
        next_arrival_ = t + rng_.exponential(rate_);
    }

    std::size_t upper_bound_time(double s) const {
        return static_cast<std::size_t>(
            std::upper_bound(jt_.begin(), jt_.end(), s) - jt_.begin());
    }

    std::size_t first_gap_above(double x) const {
        return static_cast<std::size_t>(
            std::upper_bound(post_.begin(), post_.end(), x) - post_.begin());
    }

    const LevySymbol* sym_;
    double eps_, rate_, drift_;
    Rng rng_;
    std::vector<double> jt_, pre_, post_;
    double built_s_ = 0.0;
    double next_arrival_;
};

// Grid materialization of the subordinator (the exact records stay inside
// the simulator). Rejects resolutions expecting more than one retained jump
// per step.
inline SamplePath subordinator_sample_path(SubordinatorSim& sub, double horizon,
                                           double dt) {
    if (!(dt > 0.0) || !(horizon > 0.0))
        throw std::domain_error("subordinator_sample_path: need dt, horizon > 0");
    if (sub.rate() * dt > 1.0)
        throw std::invalid_argument(
            "subordinator_sample_path: jump rate " + std::to_string(sub.rate()) +
            " exceeds one retained jump per step; decrease dt or increase eps");
    const std::size_t n = static_cast<std::size_t>(std::llround(horizon / dt));
    SamplePath p;
    p.dt = dt;
    p.kind = PathKind::subordinator;
    p.values.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) p.values[i] = sub.value(dt * static_cast<double>(i));
    return p;
}

inline SamplePath simulate_subordinator(const LevySymbol& sym, double horizon,
                                        double dt, double eps_trunc, Rng& rng) {
    if (!(eps_trunc > 0.0))
        throw std::domain_error("simulate_subordinator: eps_trunc must be > 0");
    SubordinatorSim sub(sym, eps_trunc, rng);
    return subordinator_sample_path(sub, horizon, dt);
}

// --- composed processes -------------------------------------------------------------

// B._t = H(L(gamma_t)) - gamma_t + B+_t, evaluated by jump bookkeeping.
inline SamplePath compose_bullet(const SamplePath& reflected,
                                 const SamplePath& local_time,
                                 SubordinatorSim& sub) {
    if (reflected.values.size() != local_time.values.size())
        throw std::domain_error("compose_bullet: incompatible grids");
    SamplePath out;
    out.dt = reflected.dt;
    out.kind = PathKind::composed;
    out.values.resize(reflected.values.size());
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const double g = local_time.values[i];
        const double v = sub.overshoot_end(g) - g + reflected.values[i];
        if (v < -1e-9)
            throw numeric_error("compose_bullet: negative value " + std::to_string(v));
        out.values[i] = std::max(0.0, v);
    }
    return out;
}

// B^s = B+ (T^-1), T_t = t + H(eta gamma_t); plateaus at level 0 exactly
// where T jumps. Output on the same uniform grid over [0, horizon].
struct StickyPath {
    SamplePath x;
    std::vector<std::uint8_t> plateau;    // per output index
    std::vector<std::size_t> source_exc;  // underlying excursion id per index
};

namespace detail {

// Excursion ids on the reflected path: id increments at every touch step.
inline std::vector<std::size_t> touch_excursion_ids(const std::vector<std::uint8_t>& touch) {
    std::vector<std::size_t> id(touch.size(), 0);
    std::size_t cur = 0;
    for (std::size_t i = 1; i < touch.size(); ++i) {
        if (touch[i]) ++cur;
        id[i] = cur;
    }
    return id;
}

}  // namespace detail

inline StickyPath build_sticky(const SamplePath& reflected,
                               const SamplePath& local_time, double eta,
                               SubordinatorSim& sub,
                               const std::vector<std::uint8_t>& touch) {
    const std::size_t n = reflected.values.size();
    if (local_time.values.size() != n || touch.size() != n)
        throw std::domain_error("build_sticky: incompatible grids");
    const double dt = reflected.dt;
    std::vector<double> big_t(n);
    sub.extend_to_time(eta * local_time.values[n - 1] + 1e-12);
    for (std::size_t i = 0; i < n; ++i)
        big_t[i] = reflected.t(i) + sub.value(eta * local_time.values[i]);
    const auto exc_id = detail::touch_excursion_ids(touch);

    StickyPath out;
    out.x.dt = dt;
    out.x.kind = PathKind::composed;
    out.x.values.resize(n);
    out.plateau.resize(n, 0);
    out.source_exc.resize(n, 0);
    std::size_t i = 1;  // straddling input step: big_t[i-1] <= t < big_t[i]
    const double jump_floor = std::max(1e-12, 1e-6 * dt);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = dt * static_cast<double>(k);
        while (i < n - 1 && big_t[i] <= t) ++i;
        const double into = t - big_t[i - 1];
        const double jump = big_t[i] - big_t[i - 1] - dt;
        if (into < dt || jump <= jump_floor) {
            const double frac = std::min(1.0, std::max(0.0, into / dt));
            out.x.values[k] = (1.0 - frac) * reflected.values[i - 1] +
                              frac * reflected.values[i];
            out.plateau[k] = 0;
            out.source_exc[k] = exc_id[i];
        } else {
            out.x.values[k] = 0.0;  // inside a T-jump: delayed at the origin
            out.plateau[k] = 1;
            out.source_exc[k] = exc_id[i];
        }
    }
    // A plateau shares its sign unit with the excursion that follows it in
    // real time; re-point plateau runs at the next moving stretch.
    std::size_t k = n;
    std::size_t next_unit = n ? out.source_exc[n - 1] : 0;
    while (k-- > 0) {
        if (out.plateau[k])
            out.source_exc[k] = next_unit;
        else
            next_unit = out.source_exc[k];
    }
    return out;
}

// --- full process assembly ------------------------------------------------------------

enum class ProcessKind {
    bm,
    reflected,
    skew_reflected,  // classical skew BM: signed excursions of B+
    bullet,
    skew_bullet,
    sticky,
    skew_sticky
};

inline ProcessKind parse_process(const std::string& s) {
    if (s == "bm") return ProcessKind::bm;
    if (s == "reflected") return ProcessKind::reflected;
    if (s == "skew") return ProcessKind::skew_reflected;
    if (s == "bullet") return ProcessKind::bullet;
    if (s == "skew-bullet") return ProcessKind::skew_bullet;
    if (s == "sticky") return ProcessKind::sticky;
    if (s == "skew-sticky") return ProcessKind::skew_sticky;
    throw std::invalid_argument("unknown process kind '" + s + "'");
}

inline std::string process_name(ProcessKind k) {
    switch (k) {
        case ProcessKind::bm: return "bm";
        case ProcessKind::reflected: return "reflected";
        case ProcessKind::skew_reflected: return "skew";
        case ProcessKind::bullet: return "bullet";
        case ProcessKind::skew_bullet: return "skew-bullet";
        case ProcessKind::sticky: return "sticky";
        case ProcessKind::skew_sticky: return "skew-sticky";
    }
    return "?";
}

inline bool is_skew(ProcessKind k) {
    return k == ProcessKind::skew_reflected || k == ProcessKind::skew_bullet ||
           k == ProcessKind::skew_sticky;
}
inline bool is_sticky(ProcessKind k) {
    return k == ProcessKind::sticky || k == ProcessKind::skew_sticky;
}
inline bool needs_symbol(ProcessKind k) {
    return k != ProcessKind::bm && k != ProcessKind::reflected;
}

struct ProcessParams {
    LevySymbol sym;
    double nu = 0.5;
    double eta = 1.0;
    double eps_trunc = 1e-6;
};

struct SimOptions {
    double dt = 1e-4;
    double horizon = 10.0;
    bool bridge = true;  // sample the exact within-step minimum (Brownian bridge)
};

struct PathSample {
    SamplePath x;
    ExcursionDecomposition excursions;  // excursion/plateau intervals with signs
};

namespace detail {

// Zero-started machinery: consumes n_steps Brownian increments from rng_bm
// (plus one bridge uniform per step when enabled) and assembles the process
// values into out[offset .. offset+n_steps].
inline void assemble_from_zero(ProcessKind kind, const ProcessParams& prm,
                               const SimOptions& opt, std::size_t n_steps,
                               Rng& rng_bm, Rng& rng_sub, Rng& rng_sign,
                               std::vector<double>& out, std::size_t offset,
                               ExcursionDecomposition* exc_out) {
    const double dt = opt.dt;
    const double sd = std::sqrt(kBmVariancePerTime * dt);
    const std::size_t m = n_steps + 1;
    std::vector<double> refl(m), gamma(m);
    std::vector<std::uint8_t> touch(m, 0);
    {
        double b = 0.0, run_min = 0.0;
        refl[0] = 0.0;
        gamma[0] = 0.0;
        for (std::size_t i = 1; i < m; ++i) {
            const double b_next = b + sd * rng_bm.normal();
            double m_seg;
            if (opt.bridge) {
                const double u = rng_bm.uniform();
                const double d = b_next - b;
                m_seg = 0.5 * (b + b_next -
                               std::sqrt(d * d - 2.0 * kBmVariancePerTime * dt *
                                                     std::log(u)));
            } else {
                m_seg = std::min(b, b_next);
            }
            if (m_seg < run_min) {
                run_min = m_seg;
                touch[i] = 1;
            }
            b = b_next;
            refl[i] = b - run_min;
            gamma[i] = -run_min;
        }
    }

    SamplePath refl_path, gamma_path;
    refl_path.dt = gamma_path.dt = dt;
    refl_path.kind = PathKind::reflected;
    gamma_path.kind = PathKind::local_time;

    auto emit_signed = [&](const std::vector<double>& vals,
                           const std::vector<std::size_t>& unit,
                           const std::vector<std::uint8_t>* plateau) {
        // One Bernoulli(nu) draw per unit, in unit order.
        std::vector<int> sign_of;
        auto sign_for = [&](std::size_t u) {
            while (sign_of.size() <= u)
                sign_of.push_back(rng_sign.uniform() < prm.nu ? +1 : -1);
            return sign_of[u];
        };
        const bool skew = is_skew(kind);
        for (std::size_t i = 0; i < vals.size(); ++i) {
            double v = vals[i];
            if (skew) v *= sign_for(unit[i]);
            out[offset + i] = v;
        }
        if (exc_out) {
            // Intervals of constant unit, split into plateau/excursion runs.
            std::size_t i = 0;
            while (i < vals.size()) {
                std::size_t j = i;
                const std::size_t u = unit[i];
                const bool is_plat = plateau && (*plateau)[i];
                while (j < vals.size() && unit[j] == u &&
                       (plateau == nullptr || (*plateau)[j] == (is_plat ? 1 : 0)))
                    ++j;
                ExcursionInterval iv;
                iv.begin = offset + i;
                iv.end = offset + j;
                iv.plateau = is_plat;
                iv.sign = skew ? sign_for(u) : +1;
                iv.unit = u;
                exc_out->intervals.push_back(iv);
                i = j;
            }
        }
    };

    switch (kind) {
        case ProcessKind::bm: {
            // re-derive the bm values from refl/gamma: b = refl - gamma
            for (std::size_t i = 0; i < m; ++i) out[offset + i] = refl[i] - gamma[i];
            return;
        }
        case ProcessKind::reflected:
        case ProcessKind::skew_reflected: {
            const auto ids = touch_excursion_ids(touch);
            emit_signed(refl, ids, nullptr);
            return;
        }
        case ProcessKind::bullet:
        case ProcessKind::skew_bullet: {
            SubordinatorSim sub(prm.sym, prm.eps_trunc, rng_sub);
            sub.extend_to_level(gamma[m - 1]);
            std::vector<double> vals(m);
            std::vector<std::size_t> unit(m, 0);
            std::size_t cur_unit = 0;
            auto prev_state = sub.level_state(0.0);
            for (std::size_t i = 0; i < m; ++i) {
                const double g = gamma[i];
                vals[i] = sub.overshoot_end(g) - g + refl[i];
                const auto st = sub.level_state(g);
                if (i > 0 && touch[i] && (st != prev_state || !st.second)) ++cur_unit;
                prev_state = st;
                unit[i] = cur_unit;
            }
            emit_signed(vals, unit, nullptr);
            return;
        }
        case ProcessKind::sticky:
        case ProcessKind::skew_sticky: {
            SubordinatorSim sub(prm.sym, prm.eps_trunc, rng_sub);
            refl_path.values = std::move(refl);
            gamma_path.values = std::move(gamma);
            StickyPath sp = build_sticky(refl_path, gamma_path, prm.eta, sub, touch);
            emit_signed(sp.x.values, sp.source_exc, &sp.plateau);
            return;
        }
    }
}

}  // namespace detail

// Simulate one path of the chosen process started at x0, on the uniform
// grid {0, dt, ..., horizon}. Streams: (seed, path, 0) drives the Brownian
// motion, (seed, path, 1) the subordinator, (seed, path, 2) the skew coins.
// Started away from zero the path runs as Brownian motion up to the first
// zero hit (bridge-detected within steps when enabled) and glues the
// zero-started construction there.
inline PathSample simulate_process(ProcessKind kind, const ProcessParams& prm,
                                   double x0, const SimOptions& opt,
                                   std::uint64_t seed, std::uint64_t path_id) {
    if (is_skew(kind) && !(prm.nu > 0.0 && prm.nu < 1.0))
        throw std::domain_error("simulate_process: nu must be in (0,1)");
    if (is_sticky(kind) && !(prm.eta > 0.0))
        throw std::domain_error("simulate_process: eta must be > 0");
    const std::size_t n = static_cast<std::size_t>(std::llround(opt.horizon / opt.dt));
    if (n < 2) throw std::domain_error("simulate_process: horizon too short for dt");

    Rng rng_bm = Rng::stream(seed, path_id, 0);
    Rng rng_sub = Rng::stream(seed, path_id, 1);
    Rng rng_sign = Rng::stream(seed, path_id, 2);

    PathSample ps;
    ps.x.dt = opt.dt;
    ps.x.kind = PathKind::composed;
    ps.x.values.assign(n + 1, 0.0);

    std::size_t k = 0;  // first index of the zero-started part
    if (x0 != 0.0) {
        const double flip = x0 > 0.0 ? 1.0 : -1.0;
        const double sd = std::sqrt(kBmVariancePerTime * opt.dt);
        double p = std::fabs(x0);
        ps.x.values[0] = x0;
        std::size_t i = 1;
        bool crossed = false;
        for (; i <= n; ++i) {
            const double p_next = p + sd * rng_bm.normal();
            double m_seg;
            if (opt.bridge) {
                const double u = rng_bm.uniform();
                const double d = p_next - p;
                m_seg = 0.5 * (p + p_next -
                               std::sqrt(d * d -
                                         2.0 * kBmVariancePerTime * opt.dt * std::log(u)));
            } else {
                m_seg = std::min(p, p_next);
            }
            p = p_next;
            if (m_seg <= 0.0) {
                crossed = true;
                break;
            }
            ps.x.values[i] = flip * p;
        }
        if (!crossed) return ps;  // never reached the interface
        k = i;  // zero-started part owns indices k..n (value 0 at k)
    }

    detail::assemble_from_zero(kind, prm, opt, n - k, rng_bm, rng_sub, rng_sign,
                               ps.x.values, k, &ps.excursions);
    return ps;
}

}  // namespace nlbm
