#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

// Test-function catalogs.
//
// SpatialFunction: bounded, locally Lipschitz functions on the line fed to
// the space operators (the boundedness probe is directional, since an
// operator only looks at one half-line from its evaluation point).
// TemporalFunction: functions of exponential order with an explicit
// derivative, fed to the time operator.
// TestFunction: bounded initial data for resolvents and heat solutions.

namespace nlbm {

struct SpatialFunction {
    std::string name;
    std::function<double(double)> f;
    std::function<double(double)> deriv;  // optional, used by limit checks
    double lipschitz = 1.0;
    double sup_norm = 1.0;

    double operator()(double x) const { return f(x); }
};

struct TemporalFunction {
    std::string name;
    std::function<double(double)> f;
    std::function<double(double)> deriv;  // required by the time operator
    double bound_m = 1.0;   // |f(t)| <= M e^{w t}
    double order_w = 0.0;

    double operator()(double t) const { return f(t); }
};

struct TestFunction {
    std::string name;
    std::function<double(double)> f;
    double sup_norm = 1.0;
    double lipschitz = 1.0;   // large sentinel for discontinuous entries
    bool continuous = true;

    double operator()(double x) const { return f(x); }
};

// --- spatial catalog -----------------------------------------------------------

inline SpatialFunction sf_const(double c) {
    SpatialFunction s;
    std::ostringstream os;
    os << "const:c=" << c;
    s.name = os.str();
    s.f = [c](double) { return c; };
    s.deriv = [](double) { return 0.0; };
    s.lipschitz = 0.0;
    s.sup_norm = std::fabs(c);
    return s;
}

// e^{c x}; bounded on the half-line the pairing operator actually probes.
inline SpatialFunction sf_exp(double c) {
    SpatialFunction s;
    std::ostringstream os;
    os << "exp:c=" << c;
    s.name = os.str();
    s.f = [c](double x) { return std::exp(c * x); };
    s.deriv = [c](double x) { return c * std::exp(c * x); };
    s.lipschitz = std::fabs(c);  // at the evaluation scale
    s.sup_norm = 1.0;
    return s;
}

inline SpatialFunction sf_gaussian() {
    SpatialFunction s;
    s.name = "gaussian";
    s.f = [](double x) { return std::exp(-x * x); };
    s.deriv = [](double x) { return -2.0 * x * std::exp(-x * x); };
    s.lipschitz = std::sqrt(2.0 / std::exp(1.0));
    s.sup_norm = 1.0;
    return s;
}

inline SpatialFunction sf_linear_clipped(double r) {
    SpatialFunction s;
    std::ostringstream os;
    os << "linear-clipped:r=" << r;
    s.name = os.str();
    s.f = [r](double x) { return std::max(-r, std::min(r, x)); };
    s.deriv = [r](double x) { return std::fabs(x) < r ? 1.0 : 0.0; };
    s.lipschitz = 1.0;
    s.sup_norm = r;
    return s;
}

inline SpatialFunction sf_monomial(int p, double r) {
    SpatialFunction s;
    std::ostringstream os;
    os << "monomial:p=" << p << ",r=" << r;
    s.name = os.str();
    s.f = [p, r](double x) {
        const double xc = std::max(-r, std::min(r, x));
        return std::pow(xc, p);
    };
    s.deriv = [p, r](double x) {
        return std::fabs(x) < r ? p * std::pow(x, p - 1) : 0.0;
    };
    s.lipschitz = p * std::pow(r, p - 1);
    s.sup_norm = std::pow(r, p);
    return s;
}

// --- temporal catalog ----------------------------------------------------------

inline TemporalFunction tf_const(double c) {
    TemporalFunction t;
    std::ostringstream os;
    os << "const:c=" << c;
    t.name = os.str();
    t.f = [c](double) { return c; };
    t.deriv = [](double) { return 0.0; };
    t.bound_m = std::fabs(c);
    t.order_w = 0.0;
    return t;
}

inline TemporalFunction tf_linear() {
    TemporalFunction t;
    t.name = "linear";
    t.f = [](double s) { return s; };
    t.deriv = [](double) { return 1.0; };
    t.bound_m = 1.0;
    t.order_w = 0.5;  // t <= 2 e^{t/2}
    return t;
}

inline TemporalFunction tf_exp(double c) {
    TemporalFunction t;
    std::ostringstream os;
    os << "exp:c=" << c;
    t.name = os.str();
    t.f = [c](double s) { return std::exp(c * s); };
    t.deriv = [c](double s) { return c * std::exp(c * s); };
    t.bound_m = 1.0;
    t.order_w = std::max(0.0, c);
    return t;
}

// --- resolvent / initial-datum catalog -------------------------------------------

inline TestFunction tst_one() {
    TestFunction t;
    t.name = "one";
    t.f = [](double) { return 1.0; };
    t.sup_norm = 1.0;
    t.lipschitz = 0.0;
    return t;
}

inline TestFunction tst_exp_decay(double c) {
    TestFunction t;
    std::ostringstream os;
    os << "exp_decay:c=" << c;
    t.name = os.str();
    t.f = [c](double x) { return std::exp(-c * std::fabs(x)); };
    t.sup_norm = 1.0;
    t.lipschitz = c;
    return t;
}

// e^{-c x} on x >= 0, zero on x < 0 (closed at the origin).
inline TestFunction tst_exp_decay_pos(double c) {
    TestFunction t;
    std::ostringstream os;
    os << "exp_decay_pos:c=" << c;
    t.name = os.str();
    t.f = [c](double x) { return x >= 0.0 ? std::exp(-c * x) : 0.0; };
    t.sup_norm = 1.0;
    t.lipschitz = 1e12;
    t.continuous = false;
    return t;
}

inline TestFunction tst_gaussian() {
    TestFunction t;
    t.name = "gaussian";
    t.f = [](double x) { return std::exp(-x * x); };
    t.sup_norm = 1.0;
    t.lipschitz = std::sqrt(2.0 / std::exp(1.0));
    return t;
}

inline TestFunction tst_indicator(double a, double b) {
    if (!(a < b)) throw std::domain_error("tst_indicator: need a < b");
    TestFunction t;
    std::ostringstream os;
    os << "indicator:a=" << a << ",b=" << b;
    t.name = os.str();
    t.f = [a, b](double x) { return (x >= a && x <= b) ? 1.0 : 0.0; };
    t.sup_norm = 1.0;
    t.lipschitz = 1e12;
    t.continuous = false;
    return t;
}

inline TestFunction tst_cosine_decay() {
    TestFunction t;
    t.name = "cosine_decay";
    t.f = [](double x) { return std::cos(x) * std::exp(-std::fabs(x)); };
    t.sup_norm = 1.0;
    t.lipschitz = 1.5;
    return t;
}

namespace detail {
inline std::map<std::string, double> parse_params(const std::string& key,
                                                  std::size_t colon) {
    std::map<std::string, double> kv;
    if (colon == std::string::npos) return kv;
    std::stringstream ss(key.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("bad parameter '" + item + "' in key '" +
                                        key + "'");
        kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return kv;
}
inline double param_or(const std::map<std::string, double>& kv, const char* p,
                       double dflt) {
    auto it = kv.find(p);
    return it == kv.end() ? dflt : it->second;
}
}  // namespace detail

inline TemporalFunction parse_temporal_function(const std::string& key) {
    const auto colon = key.find(':');
    const std::string fam = key.substr(0, colon);
    auto kv = detail::parse_params(key, colon);
    if (fam == "const") return tf_const(detail::param_or(kv, "c", 1.0));
    if (fam == "linear") return tf_linear();
    if (fam == "exp") return tf_exp(detail::param_or(kv, "c", 1.0));
    throw std::invalid_argument("parse_temporal_function: unknown key '" + key + "'");
}

inline SpatialFunction parse_spatial_function(const std::string& key) {
    const auto colon = key.find(':');
    const std::string fam = key.substr(0, colon);
    auto kv = detail::parse_params(key, colon);
    if (fam == "const") return sf_const(detail::param_or(kv, "c", 1.0));
    if (fam == "exp") return sf_exp(detail::param_or(kv, "c", 1.0));
    if (fam == "gaussian") return sf_gaussian();
    if (fam == "linear-clipped")
        return sf_linear_clipped(detail::param_or(kv, "r", 50.0));
    if (fam == "monomial")
        return sf_monomial(static_cast<int>(detail::param_or(kv, "p", 2.0)),
                           detail::param_or(kv, "r", 10.0));
    throw std::invalid_argument("parse_spatial_function: unknown key '" + key + "'");
}

inline TestFunction parse_test_function(const std::string& key) {
    const auto colon = key.find(':');
    const std::string fam = key.substr(0, colon);
    auto kv = detail::parse_params(key, colon);
    if (fam == "one") return tst_one();
    if (fam == "exp_decay") return tst_exp_decay(detail::param_or(kv, "c", 1.0));
    if (fam == "exp_decay_pos")
        return tst_exp_decay_pos(detail::param_or(kv, "c", 1.0));
    if (fam == "gaussian") return tst_gaussian();
    if (fam == "indicator")
        return tst_indicator(detail::param_or(kv, "a", 0.0),
                             detail::param_or(kv, "b", 1.0));
    if (fam == "cosine_decay") return tst_cosine_decay();
    throw std::invalid_argument("parse_test_function: unknown key '" + key + "'");
}

}  // namespace nlbm
