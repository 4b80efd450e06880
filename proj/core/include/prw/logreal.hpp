#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <string>

#include "prw/lattice.hpp"

namespace prw {

// Signed real with a level-index (iterated-exponential) magnitude:
//   value = sign * exp(lsign * m * exp^level(w)).
// The feasible waiting-time sequences grow as exponential towers, so a
// single log layer overflows after a few levels. The mantissa m keeps
// ratios of same-tower logarithms exact (ln l / ln p and the like), which
// the constraint comparisons depend on; w carries the tower itself.
// Canonical form: level 0 stores the log-magnitude in m (w = 0); level >= 1
// has w in (ln 709, 709]; lsign = 0 encodes magnitude one; sign = 0 zero.
class LogReal {
  public:
    LogReal() = default; // zero

    static LogReal from_double(double v) {
        if (!std::isfinite(v)) throw Error("LogReal: non-finite input");
        if (v == 0.0) return LogReal();
        LogReal r;
        r.sign_ = v > 0 ? 1 : -1;
        double ln = std::log(std::abs(v));
        if (ln == 0.0) return r; // lsign stays 0
        r.lsign_ = ln > 0 ? 1 : -1;
        r.lam_ = Tower{std::abs(ln), 0, 0.0};
        return r;
    }

    static LogReal one() { return from_double(1.0); }

    // e^t for any LogReal t
    static LogReal exp_of(const LogReal& t) {
        LogReal r;
        r.sign_ = 1;
        if (t.sign_ == 0) return r.finish(0, Tower{});
        Tower mag = t_exp(ST{t.lsign_, t.lam_}); // |t|
        if (mag.m == 0.0) return r.finish(0, Tower{});
        return r.finish(t.sign_, mag);
    }

    int sign() const { return sign_; }
    bool is_zero() const { return sign_ == 0; }

    // natural log; value must be positive
    LogReal log() const {
        if (sign_ <= 0) throw Error("LogReal::log of non-positive value");
        return log_abs();
    }

    // ln|value| as a LogReal; value must be nonzero
    LogReal log_abs() const {
        if (sign_ == 0) throw Error("LogReal::log_abs of zero");
        if (lsign_ == 0) return LogReal();
        LogReal r;
        r.sign_ = lsign_;
        ST l = st_ln(lam_);
        return r.finish(l.s, l.t);
    }

    // saturating conversion (0 on underflow, +-inf on overflow)
    double to_double() const {
        if (sign_ == 0) return 0.0;
        if (lsign_ == 0) return static_cast<double>(sign_);
        double lam;
        if (lam_.lvl == 0) lam = lam_.m;
        else if (lam_.lvl == 1) lam = lam_.m * std::exp(lam_.w);
        else lam = std::numeric_limits<double>::infinity();
        double v = std::exp(lsign_ > 0 ? lam : -lam);
        return sign_ > 0 ? v : -v;
    }

    // true when to_double keeps the magnitude well inside the double range
    bool dbl_ok() const {
        if (sign_ == 0 || lsign_ == 0) return true;
        return lam_.lvl == 0 && lam_.m <= 690.0;
    }

    LogReal operator-() const {
        LogReal r = *this;
        r.sign_ = -r.sign_;
        return r;
    }

    friend LogReal operator+(const LogReal& a, const LogReal& b) { return add(a, b); }
    friend LogReal operator-(const LogReal& a, const LogReal& b) { return add(a, -b); }
    friend LogReal operator*(const LogReal& a, const LogReal& b) { return mul(a, b); }
    friend LogReal operator/(const LogReal& a, const LogReal& b) {
        if (b.sign_ == 0) throw Error("LogReal: division by zero");
        return mul(a, b.inverse());
    }

    LogReal inverse() const {
        if (sign_ == 0) throw Error("LogReal: inverse of zero");
        LogReal r = *this;
        r.lsign_ = -r.lsign_;
        return r;
    }

    // x^e; requires x >= 0 (e < 0 allowed); mantissa-exact log scaling
    LogReal pow(double e) const {
        if (sign_ < 0) throw Error("LogReal::pow of negative base");
        if (sign_ == 0) {
            if (e <= 0.0) throw Error("LogReal::pow: 0 to non-positive power");
            return LogReal();
        }
        if (lsign_ == 0 || e == 0.0) return one();
        LogReal r;
        r.sign_ = 1;
        ST l = st_scale(ST{lsign_, lam_}, e);
        return r.finish(l.s, l.t);
    }

    // -1 / 0 / +1 as value compares to o
    int cmp(const LogReal& o) const { return add(*this, -o).sign_; }
    bool operator<(const LogReal& o) const { return cmp(o) < 0; }
    bool operator<=(const LogReal& o) const { return cmp(o) <= 0; }
    bool operator>(const LogReal& o) const { return cmp(o) > 0; }
    bool operator>=(const LogReal& o) const { return cmp(o) >= 0; }
    bool operator==(const LogReal& o) const { return cmp(o) == 0; }

    static LogReal max(const LogReal& a, const LogReal& b) { return a.cmp(b) >= 0 ? a : b; }

    // "0", "1", "-1", or "[-]exp([-][m*][E<level>(]w[)])"
    std::string str() const {
        if (sign_ == 0) return "0";
        std::string s = sign_ < 0 ? "-" : "";
        if (lsign_ == 0) return s + "1";
        char buf[64];
        s += "exp(";
        if (lsign_ < 0) s += "-";
        if (lam_.lvl == 0) {
            std::snprintf(buf, sizeof buf, "%.17g", lam_.m);
            s += buf;
        } else {
            if (lam_.m != 1.0) {
                std::snprintf(buf, sizeof buf, "%.17g*", lam_.m);
                s += buf;
            }
            std::snprintf(buf, sizeof buf, "E%d(%.17g)", lam_.lvl, lam_.w);
            s += buf;
        }
        s += ")";
        return s;
    }

    static LogReal parse(const std::string& text) {
        const char* p = text.c_str();
        auto fail = [&] { throw Error("LogReal::parse: bad literal '" + text + "'"); };
        int sign = 1;
        if (*p == '-') { sign = -1; ++p; }
        if (std::strncmp(p, "exp(", 4) != 0) {
            char* end = nullptr;
            double v = std::strtod(text.c_str(), &end);
            if (end == text.c_str() || *end != '\0') fail();
            return from_double(v);
        }
        p += 4;
        int lsign = 1;
        if (*p == '-') { lsign = -1; ++p; }
        double m = 1.0;
        int lvl = 0;
        double w = 0.0;
        char* end = nullptr;
        if (*p != 'E') {
            m = std::strtod(p, &end);
            if (end == p) fail();
            p = end;
            if (*p == '*') ++p;
            else { // plain level-0 literal: the number read is the log-magnitude
                if (*p != ')') fail();
                ++p;
                if (*p != '\0') fail();
                LogReal r;
                r.sign_ = sign;
                return r.finish(lsign, Tower{m, 0, 0.0});
            }
        }
        if (*p != 'E') fail();
        ++p;
        lvl = static_cast<int>(std::strtol(p, &end, 10));
        if (end == p || *end != '(') fail();
        p = end + 1;
        w = std::strtod(p, &end);
        if (end == p) fail();
        p = end;
        if (std::strcmp(p, "))") != 0) fail();
        LogReal r;
        r.sign_ = sign;
        return r.finish(lsign, tnorm(Tower{m, lvl, w}));
    }

  private:
    static constexpr double kTop = 709.0;

    struct Tower { // positive value m * exp^lvl(w); m == 0 encodes zero
        double m = 0.0;
        int lvl = 0;
        double w = 0.0;
    };
    struct ST { // signed tower; s == 0 encodes zero
        int s = 0;
        Tower t;
    };

    int sign_ = 0;  // sign of the value
    int lsign_ = 0; // sign of ln(magnitude)
    Tower lam_;     // |ln(magnitude)|

    LogReal& finish(int lsign, Tower lam) {
        if (lsign == 0 || lam.m == 0.0) {
            lsign_ = 0;
            lam_ = Tower{};
        } else {
            lsign_ = lsign;
            lam_ = lam;
        }
        return *this;
    }

    static double lntop() { return 6.563855034599608; } // ln 709

    static Tower tnorm(Tower t) {
        if (!(t.m >= 0.0) || !std::isfinite(t.m) || !std::isfinite(t.w))
            throw Error("LogReal: non-finite tower");
        if (t.m == 0.0) return Tower{};
        for (;;) {
            if (t.lvl >= 1 && t.w > kTop) { t.w = std::log(t.w); ++t.lvl; continue; }
            if (t.lvl >= 2 && t.w <= lntop()) { t.w = std::exp(t.w); --t.lvl; continue; }
            if (t.lvl == 1 && t.w <= lntop()) {
                t.m *= std::exp(t.w); t.lvl = 0; t.w = 0.0; continue;
            }
            if (t.lvl == 0 && t.m > 1e300) { t.w = std::log(t.m); t.m = 1.0; t.lvl = 1; continue; }
            if (t.lvl == 1 && (t.m > 1e300 || t.m < 1e-300)) {
                // fold the mantissa into the exponent (precision drops to w's ulp)
                t.w += std::log(t.m);
                t.m = 1.0;
                if (t.w <= 0.0) { t.m = std::exp(t.w); t.lvl = 0; t.w = 0.0; }
                continue;
            }
            if (t.lvl >= 2 && (t.m > 1e300 || t.m < 1e-300))
                throw Error("LogReal: tower mantissa out of range");
            break;
        }
        return t;
    }

    static bool st_dbl(const ST& x, double* out) {
        if (x.s == 0) { *out = 0.0; return true; }
        if (x.t.lvl != 0) return false;
        *out = x.s * x.t.m;
        return true;
    }

    static ST st_from_double(double v) {
        if (v == 0.0) return ST{};
        return ST{v > 0 ? 1 : -1, tnorm(Tower{std::abs(v), 0, 0.0})};
    }

    static ST st_neg(ST x) { x.s = -x.s; return x; }

    static ST st_scale(ST x, double f) {
        if (x.s == 0 || f == 0.0) return ST{};
        if (f < 0) { x.s = -x.s; f = -f; }
        x.t.m *= f;
        x.t = tnorm(x.t);
        return x;
    }

    // exp^{lvl-1}(w) as a tower (level 0 carries its value in m)
    static Tower t_down(const Tower& t) {
        return t.lvl == 1 ? Tower{t.w, 0, 0.0} : Tower{1.0, t.lvl - 1, t.w};
    }

    // ln of a positive tower value, one level down
    static ST st_ln(const Tower& t) {
        if (t.m == 0.0) throw Error("LogReal: ln of zero tower");
        if (t.lvl == 0) return st_from_double(std::log(t.m));
        return st_add(ST{1, t_down(t)}, st_from_double(std::log(t.m)));
    }

    // e^x as a positive tower (m == 0 on underflow)
    static Tower t_exp(const ST& x) {
        if (x.s == 0) return Tower{1.0, 0, 0.0};
        const Tower& t = x.t;
        if (x.s < 0) { // magnitude < 1
            if (t.lvl == 0 && t.m <= 745.0) return Tower{std::exp(-t.m), 0, 0.0};
            return Tower{}; // underflows below the representable range
        }
        if (t.lvl == 0) {
            if (t.m <= 690.0) return Tower{std::exp(t.m), 0, 0.0};
            return tnorm(Tower{1.0, 1, t.m});
        }
        if (t.m == 1.0) return tnorm(Tower{1.0, t.lvl + 1, t.w});
        // e^{m exp^lvl(w)} = e^{e^{ln m + exp^{lvl-1}(w)}}
        ST inner = st_add(ST{1, t_down(t)}, st_from_double(std::log(t.m)));
        return t_exp(ST{1, t_exp(inner)});
    }

    // x + y over signed towers
    static ST st_add(const ST& x, const ST& y) {
        if (x.s == 0) return y;
        if (y.s == 0) return x;
        if (x.t.lvl == 0 && y.t.lvl == 0) {
            double s = x.s * x.t.m + y.s * y.t.m;
            if (std::abs(s) <= 1e300) return st_from_double(s);
        }
        if (x.t.lvl == y.t.lvl && x.t.w == y.t.w) {
            // identical towers: mantissa arithmetic is exact
            double m = x.s * x.t.m + y.s * y.t.m;
            if (m == 0.0) return ST{};
            return ST{m > 0 ? 1 : -1, tnorm(Tower{std::abs(m), x.t.lvl, x.t.w})};
        }
        ST diff = st_add(st_ln(x.t), st_neg(st_ln(y.t))); // ln(|x|/|y|)
        double d;
        if (st_dbl(diff, &d) && std::abs(d) <= 690.0) {
            const ST& dom = d >= 0 ? x : y;
            const ST& sub = d >= 0 ? y : x;
            double f = 1.0 + (dom.s == sub.s ? 1.0 : -1.0) * std::exp(-std::abs(d));
            if (f == 0.0) return ST{};
            ST r = dom;
            r.t.m *= f;
            r.t = tnorm(r.t);
            return r;
        }
        return diff.s > 0 ? x : y; // the other is below any representable correction
    }

    static LogReal mul(const LogReal& a, const LogReal& b) {
        if (a.sign_ == 0 || b.sign_ == 0) return LogReal();
        LogReal r;
        r.sign_ = a.sign_ * b.sign_;
        if (a.lsign_ == 0) return r.finish(b.lsign_, b.lam_);
        if (b.lsign_ == 0) return r.finish(a.lsign_, a.lam_);
        ST l = st_add(ST{a.lsign_, a.lam_}, ST{b.lsign_, b.lam_});
        return r.finish(l.s, l.t);
    }

    static LogReal add(const LogReal& a, const LogReal& b) {
        if (a.sign_ == 0) return b;
        if (b.sign_ == 0) return a;
        if (a.dbl_ok() && b.dbl_ok()) {
            double s = a.to_double() + b.to_double();
            if (std::abs(s) < 1e300 && (s != 0.0 || a.sign_ != b.sign_))
                return from_double(s);
        }
        // ln(|a|/|b|) decides dominance; a near-tie folds into a log1p factor
        ST diff = st_add(ST{a.lsign_, a.lam_}, st_neg(ST{b.lsign_, b.lam_}));
        double d;
        if (st_dbl(diff, &d) && std::abs(d) <= 690.0) {
            const LogReal& dom = d >= 0 ? a : b;
            const LogReal& sub = d >= 0 ? b : a;
            double r = std::exp(-std::abs(d));
            double corr = std::log1p((dom.sign_ == sub.sign_ ? 1.0 : -1.0) * r);
            if (!std::isfinite(corr)) return LogReal(); // full cancellation
            ST l = st_add(ST{dom.lsign_, dom.lam_}, st_from_double(corr));
            LogReal out;
            out.sign_ = dom.sign_;
            return out.finish(l.s, l.t);
        }
        return diff.s > 0 ? a : b;
    }
};

} // namespace prw
