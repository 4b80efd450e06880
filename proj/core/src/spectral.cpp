#include "prw/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace prw {

namespace {

using cplx = std::complex<double>;

cplx cdot(const Eigen::VectorXd& pi, const Eigen::VectorXcd& v) {
    cplx s = 0.0;
    for (int i = 0; i < pi.size(); ++i) s += pi(i) * v(i);
    return s;
}

std::vector<EdgeJump::Point> edge_points(const EdgeJump& e) {
    std::vector<EdgeJump::Point> out;
    switch (e.kind) {
        case EdgeJump::Kind::Axis:
            for (std::int64_t x = e.nu.lo(); x <= e.nu.hi(); ++x) {
                double m = e.nu.mass_at(x);
                if (m > 0.0) out.push_back({x * e.dir.x, x * e.dir.y, m});
            }
            break;
        case EdgeJump::Kind::Sparse:
            for (const auto& p : e.pts)
                if (p.mass > 0.0) out.push_back(p);
            break;
        case EdgeJump::Kind::Analytic:
            throw ContractError("edge_points: analytic jump law has no lattice support");
    }
    return out;
}

bool points_symmetric(std::vector<EdgeJump::Point> pts) {
    auto key = [](const EdgeJump::Point& p) { return std::make_pair(p.x, p.y); };
    std::sort(pts.begin(), pts.end(),
              [&](const auto& a, const auto& b) { return key(a) < key(b); });
    for (const auto& p : pts) {
        auto it = std::lower_bound(pts.begin(), pts.end(), std::make_pair(-p.x, -p.y),
                                   [&](const auto& a, const auto& b) { return key(a) < b; });
        if (it == pts.end() || it->x != -p.x || it->y != -p.y ||
            std::abs(it->mass - p.mass) > 1e-12)
            return false;
    }
    return true;
}

} // namespace

EdgeJump EdgeJump::axis(LatticePMF nu, IVec2 dir) {
    EdgeJump e;
    e.kind = Kind::Axis;
    e.nu = std::move(nu);
    e.dir = dir;
    return e;
}

EdgeJump EdgeJump::sparse(std::vector<Point> pts) {
    EdgeJump e;
    e.kind = Kind::Sparse;
    e.pts = std::move(pts);
    return e;
}

EdgeJump EdgeJump::analytic(std::function<cplx(Vec2)> chf, std::function<cplx(Vec2)> def) {
    EdgeJump e;
    e.kind = Kind::Analytic;
    e.chf_fn = std::move(chf);
    e.def_fn = std::move(def);
    return e;
}

std::complex<double> EdgeJump::chf(Vec2 t) const {
    switch (kind) {
        case Kind::Axis:
            return char_fn(nu, t.x * static_cast<double>(dir.x) + t.y * static_cast<double>(dir.y));
        case Kind::Sparse: {
            cplx s = 0.0;
            for (const auto& p : pts)
                s += p.mass * std::polar(1.0, t.x * static_cast<double>(p.x) +
                                                  t.y * static_cast<double>(p.y));
            return s;
        }
        default:
            return chf_fn(t);
    }
}

std::complex<double> EdgeJump::deficiency(Vec2 t) const {
    // 1 - e^{i theta} = 2 sin^2(theta/2) - i sin(theta)
    auto one_minus = [](double theta) {
        double s = std::sin(theta / 2.0);
        return cplx(2.0 * s * s, -std::sin(theta));
    };
    switch (kind) {
        case Kind::Axis: {
            cplx acc = nu.defect();
            for (std::int64_t x = nu.lo(); x <= nu.hi(); ++x) {
                double m = nu.mass_at(x);
                if (m == 0.0) continue;
                acc += m * one_minus(static_cast<double>(x) *
                                     (t.x * static_cast<double>(dir.x) +
                                      t.y * static_cast<double>(dir.y)));
            }
            return acc;
        }
        case Kind::Sparse: {
            cplx acc = 0.0;
            double mass = 0.0;
            for (const auto& p : pts) {
                acc += p.mass * one_minus(t.x * static_cast<double>(p.x) +
                                          t.y * static_cast<double>(p.y));
                mass += p.mass;
            }
            return acc + (1.0 - mass);
        }
        default:
            return def_fn ? def_fn(t) : 1.0 - chf_fn(t);
    }
}

bool MRWModel::all_lattice() const {
    for (int i = 0; i < size(); ++i)
        for (int j = 0; j < size(); ++j)
            if (P(i, j) > 0.0 && !jumps[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].is_lattice())
                return false;
    return true;
}

MRWModel mrw_from_skeleton(const InternalKernel& kernel, const ConditionalJumpLaws& laws) {
    MRWModel m;
    m.P = kernel.matrix;
    m.pi = kernel.pi;
    int n = kernel.size();
    m.jumps.assign(static_cast<std::size_t>(n), std::vector<EdgeJump>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (kernel.matrix(i, j) > 0.0)
                m.jumps[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    EdgeJump::axis(laws.nu[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                                   kernel.dir(i));
    return m;
}

MRWModel mrw_single(EdgeJump jump) {
    MRWModel m;
    m.P = Eigen::MatrixXd::Ones(1, 1);
    m.pi = Eigen::VectorXd::Ones(1);
    m.jumps.assign(1, std::vector<EdgeJump>{std::move(jump)});
    return m;
}

Eigen::MatrixXcd perturbed_operator(const MRWModel& m, Vec2 t) {
    int n = m.size();
    Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (m.P(i, j) > 0.0)
                op(i, j) = m.P(i, j) *
                           m.jumps[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].chf(t);
    return op;
}

PrincipalEigen principal_eigenvalue(const MRWModel& m, Vec2 t, double gap_tol) {
    PrincipalEigen out;
    if (m.size() == 1) {
        out.lambda = m.jumps[0][0].chf(t);
        out.eigvec = Eigen::VectorXcd::Ones(1);
        out.gap = 1.0;
        return out;
    }
    Eigen::MatrixXcd op = perturbed_operator(m, t);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(op);
    if (ces.info() != Eigen::Success) throw Error("principal_eigenvalue: eigensolver failed");
    const auto& ev = ces.eigenvalues();
    int best = 0, second = -1;
    for (int k = 1; k < ev.size(); ++k)
        if (std::abs(ev(k)) > std::abs(ev(best))) best = k;
    for (int k = 0; k < ev.size(); ++k) {
        if (k == best) continue;
        if (second < 0 || std::abs(ev(k)) > std::abs(ev(second))) second = k;
    }
    out.lambda = ev(best);
    out.gap = second < 0 ? 1.0 : std::abs(ev(best)) - std::abs(ev(second));
    if (out.gap < gap_tol)
        throw Error("principal_eigenvalue: neighbourhood exceeded (gap " +
                    std::to_string(out.gap) + " at t=(" + std::to_string(t.x) + "," +
                    std::to_string(t.y) + "))");
    out.eigvec = ces.eigenvectors().col(best);
    cplx c = cdot(m.pi, out.eigvec);
    if (std::abs(c) < 1e-12)
        throw Error("principal_eigenvalue: eigenvector nearly orthogonal to pi");
    out.eigvec /= c;
    return out;
}

std::complex<double> eigen_deficiency(const MRWModel& m, Vec2 t, double gap_tol) {
    if (m.size() == 1) return m.jumps[0][0].deficiency(t);
    return 1.0 - principal_eigenvalue(m, t, gap_tol).lambda;
}

Eigen::VectorXd reduced_resolvent_apply(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi,
                                        const Eigen::VectorXd& f) {
    int n = static_cast<int>(P.rows());
    Eigen::VectorXd g = f - (pi.dot(f)) * Eigen::VectorXd::Ones(n);

    // linear-solve route: (I-P)x = g with pi.x = 0 (consistent, rank n)
    Eigen::MatrixXd A(n + 1, n);
    A.topRows(n) = Eigen::MatrixXd::Identity(n, n) - P;
    A.row(n) = pi.transpose();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
    b.head(n) = g;
    Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);

    // partial-sum route
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n), term = g;
    const int cap = 2'000'000;
    int it = 0;
    for (; it < cap; ++it) {
        acc += term;
        if (term.cwiseAbs().maxCoeff() < 1e-13) break;
        term = P * term;
    }
    if (it == cap) throw Error("reduced_resolvent_apply: partial sums did not converge");
    if ((acc - x).cwiseAbs().maxCoeff() > 1e-10)
        throw Error("reduced_resolvent_apply: iterative and solve routes disagree by " +
                    std::to_string((acc - x).cwiseAbs().maxCoeff()));
    return x;
}

std::complex<double> expansion_eigenvalue(const MRWModel& m, Vec2 t, int order, double* err) {
    int n = m.size();
    Eigen::MatrixXcd D = perturbed_operator(m, t) - m.P.cast<cplx>();
    Eigen::VectorXcd v = D * Eigen::VectorXcd::Ones(n);
    cplx sum = 0.0;
    double prev_mag = -1.0, last_mag = 0.0;
    int growth = 0; // early terms may tie in magnitude; only a sustained
                    // ratio >= 1 marks genuine divergence
    for (int k = 0; k <= order; ++k) {
        cplx term = cdot(m.pi, v);
        last_mag = std::abs(term);
        if (prev_mag >= 0.0 && last_mag >= prev_mag && last_mag > 1e-13)
            ++growth;
        else
            growth = 0;
        if (growth >= 3)
            throw Error("expansion_eigenvalue: series diverges (term ratio >= 1 at order " +
                        std::to_string(k) + ")");
        prev_mag = last_mag;
        sum += term;
        if (k == order || last_mag < 1e-18) break;
        Eigen::VectorXd re(n), im(n);
        for (int i = 0; i < n; ++i) {
            re(i) = v(i).real();
            im(i) = v(i).imag();
        }
        Eigen::VectorXd tre = reduced_resolvent_apply(m.P, m.pi, re);
        Eigen::VectorXd tim = reduced_resolvent_apply(m.P, m.pi, im);
        Eigen::VectorXcd tv(n);
        for (int i = 0; i < n; ++i) tv(i) = cplx(tre(i), tim(i));
        v = D * tv;
    }
    if (err) *err = last_mag;
    return sum;
}

SectorReport sector_check(const MRWModel& m, const std::vector<Vec2>& grid, double K) {
    SectorReport rep;

    // pi-reversibility with mirror-symmetric edge laws forces a real spectrum
    bool rev = true;
    for (int i = 0; i < m.size() && rev; ++i)
        for (int j = 0; j < m.size() && rev; ++j)
            if (std::abs(m.pi(i) * m.P(i, j) - m.pi(j) * m.P(j, i)) > 1e-12) rev = false;
    if (rev && m.all_lattice()) {
        for (int i = 0; i < m.size() && rev; ++i)
            for (int j = 0; j < m.size() && rev; ++j) {
                if (m.P(i, j) <= 0.0) continue;
                auto a = edge_points(m.jumps[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
                auto b = edge_points(m.jumps[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
                if (a.size() != b.size()) {
                    rev = false;
                    break;
                }
                auto lt = [](const auto& p, const auto& q) {
                    return std::make_pair(p.x, p.y) < std::make_pair(q.x, q.y);
                };
                for (auto& p : b) {
                    p.x = -p.x;
                    p.y = -p.y;
                }
                std::sort(a.begin(), a.end(), lt);
                std::sort(b.begin(), b.end(), lt);
                for (std::size_t k = 0; k < a.size(); ++k)
                    if (a[k].x != b[k].x || a[k].y != b[k].y ||
                        std::abs(a[k].mass - b[k].mass) > 1e-12) {
                        rev = false;
                        break;
                    }
            }
        rep.real_spectrum_asserted = rev;
    }

    for (const Vec2& t : grid) {
        if (t.x == 0.0 && t.y == 0.0) continue;
        cplx d = eigen_deficiency(m, t);
        double im = std::abs(d.imag());
        rep.max_im = std::max(rep.max_im, im);
        if (d.real() > 0.0)
            rep.K_hat = std::max(rep.K_hat, im / d.real());
        else if (im > 1e-12)
            rep.K_hat = std::numeric_limits<double>::infinity();
    }
    if (rep.real_spectrum_asserted && rep.max_im > 1e-12)
        throw Error("sector_check: reversible mirror-symmetric model with Im lambda = " +
                    std::to_string(rep.max_im));
    rep.pass = rep.K_hat <= K;
    return rep;
}

namespace {

// index of the subgroup of Z^2 generated by `gens` (0 when rank < 2)
std::int64_t subgroup_index(std::vector<std::array<std::int64_t, 2>> gens) {
    // column-style Hermite reduction on at most two retained rows
    std::array<std::int64_t, 2> r1{0, 0}, r2{0, 0};
    auto reduce = [&](std::array<std::int64_t, 2> v) {
        // fold v into (r1, r2) keeping r1.x = gcd of seen x's, r2 = (0, *)
        while (v[0] != 0) {
            if (r1[0] == 0) {
                std::swap(r1, v);
                break;
            }
            std::int64_t q = v[0] / r1[0];
            v[0] -= q * r1[0];
            v[1] -= q * r1[1];
            if (v[0] != 0) std::swap(r1, v);
        }
        if (v[0] == 0 && v[1] != 0) {
            std::int64_t g = std::gcd(std::abs(r2[1]), std::abs(v[1]));
            r2[1] = g;
        }
    };
    for (const auto& g : gens) reduce(g);
    // fold r1's y into r2 modulo nothing (only the index matters)
    if (r1[0] == 0) return 0;
    if (r2[1] == 0) return 0;
    return std::abs(r1[0]) * r2[1];
}

struct QuadSample {
    double re, im, w;
};

} // namespace

FourierReport fourier_criterion(const MRWModel& m, FourierOptions opts) {
    FourierReport rep;

    if (m.all_lattice()) {
        // coset test: differences of all jump support points
        std::vector<std::array<std::int64_t, 2>> gens;
        bool have_base = false;
        std::array<std::int64_t, 2> base{0, 0};
        for (int i = 0; i < m.size(); ++i)
            for (int j = 0; j < m.size(); ++j) {
                if (m.P(i, j) <= 0.0) continue;
                for (const auto& p :
                     edge_points(m.jumps[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])) {
                    if (!have_base) {
                        base = {p.x, p.y};
                        have_base = true;
                    } else {
                        gens.push_back({p.x - base[0], p.y - base[1]});
                    }
                }
            }
        std::int64_t idx = subgroup_index(std::move(gens));
        if (idx != 1) {
            rep.periodic_flag = true;
            rep.periodic_note = "jump supports lie in a coset of a proper subgroup (index " +
                                std::to_string(idx) + "); reported only";
        }
    }

    int n = opts.annulus_grid;
    if (n % 4 != 0) n += 4 - n % 4; // annulus boundary must align with cells
    int depth = std::max(4, opts.j_max / 2 + 3);
    double v = opts.v;
    std::vector<QuadSample> samples;

    for (int attempt = 0;; ++attempt) {
        samples.clear();
        try {
            for (int jd = 0; jd <= depth; ++jd) {
                double side = v * std::ldexp(1.0, -jd);
                double step = 2.0 * side / n;
                double inner = side / 2.0;
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) {
                        double tx = -side + (a + 0.5) * step;
                        double ty = -side + (b + 0.5) * step;
                        if (jd < depth &&
                            std::max(std::abs(tx), std::abs(ty)) < inner - 1e-12 * side)
                            continue;
                        cplx d = eigen_deficiency(m, {tx, ty});
                        if (d.real() < 1e-12 && std::max(std::abs(tx), std::abs(ty)) > 0.1 * v) {
                            rep.periodic_flag = true;
                            rep.periodic_note += " |lambda| ~ 1 at t=(" + std::to_string(tx) +
                                                 "," + std::to_string(ty) + ");";
                        }
                        samples.push_back({d.real(), d.imag(), step * step});
                    }
            }
            break;
        } catch (const Error&) {
            if (attempt >= 6) throw;
            v /= 2.0;
            rep.detail += "neighbourhood shrunk to half-width " + std::to_string(v) + "; ";
        }
    }

    rep.integral.resize(static_cast<std::size_t>(opts.j_max));
    for (int j = 1; j <= opts.j_max; ++j) {
        double eps = std::ldexp(1.0, -j);
        double acc = 0.0;
        for (const auto& s : samples) {
            double zr = s.re + eps * (1.0 - s.re);
            double zi = s.im * (1.0 - eps);
            acc += s.w * zr / (zr * zr + zi * zi);
        }
        rep.integral[static_cast<std::size_t>(j - 1)] = acc;
    }

    int w = opts.window;
    if (opts.j_max < w + 1) {
        rep.detail += "too few halvings to classify";
        return rep;
    }
    double last = rep.integral.back();
    bool grows = true, steady = true, sloped = opts.slope_min > 0.0;
    for (int j = opts.j_max - w + 1; j <= opts.j_max; ++j) {
        double prev = rep.integral[static_cast<std::size_t>(j - 2)];
        double curv = rep.integral[static_cast<std::size_t>(j - 1)];
        double rel = (curv - prev) / std::max(std::abs(prev), 1e-300);
        if (rel < opts.growth) grows = false;
        if (std::abs(rel) >= opts.converge_rtol) steady = false;
        if (curv - prev < opts.slope_min * std::numbers::ln2) sloped = false;
    }
    // the slope route stands on its own: a log-divergent integral keeps a
    // fixed per-halving increment but never clears an absolute escape level
    if ((last > opts.escape && grows) || sloped) {
        rep.verdict = Classification::Diverges;
        rep.detail += sloped ? "sustained per-halving increment (last integral " +
                                   std::to_string(last) + ")"
                             : "integral " + std::to_string(last) +
                                   " above escape with positive trend";
    } else if (steady) {
        rep.verdict = Classification::Converges;
        rep.detail += "integral settled at " + std::to_string(last);
    } else {
        rep.verdict = Classification::Undecided;
        rep.detail += "no stable trend (last integral " + std::to_string(last) + ")";
    }
    return rep;
}

namespace {

struct DenseGrid {
    std::int64_t x0 = 0, y0 = 0;
    std::int64_t nx = 0, ny = 0;
    std::vector<double> a;

    double at(std::int64_t x, std::int64_t y) const {
        if (x < x0 || x >= x0 + nx || y < y0 || y >= y0 + ny) return 0.0;
        return a[static_cast<std::size_t>((y - y0) * nx + (x - x0))];
    }
};

std::vector<double> return_probs_dense(const MRWModel& m, const Eigen::VectorXd& nu0,
                                       std::int64_t N, const ReturnProbOptions& opts) {
    int ns = m.size();
    std::vector<std::vector<EdgeJump::Point>> supp(static_cast<std::size_t>(ns) *
                                                   static_cast<std::size_t>(ns));
    for (int i = 0; i < ns; ++i)
        for (int j = 0; j < ns; ++j)
            if (m.P(i, j) > 0.0)
                supp[static_cast<std::size_t>(i * ns + j)] =
                    edge_points(m.jumps[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);

    std::vector<DenseGrid> cur(static_cast<std::size_t>(ns));
    for (int i = 0; i < ns; ++i) {
        cur[static_cast<std::size_t>(i)] = {0, 0, 1, 1, {nu0(i)}};
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(N + 1));
    out.push_back(nu0.sum());

    std::size_t ops = 0;
    for (std::int64_t step = 1; step <= N; ++step) {
        // output bounds per state
        std::vector<DenseGrid> next(static_cast<std::size_t>(ns));
        for (int j = 0; j < ns; ++j) {
            std::int64_t lox = 0, hix = 0, loy = 0, hiy = 0;
            bool any = false;
            for (int i = 0; i < ns; ++i) {
                if (m.P(i, j) <= 0.0 || cur[static_cast<std::size_t>(i)].a.empty()) continue;
                const auto& s = supp[static_cast<std::size_t>(i * ns + j)];
                if (s.empty()) continue;
                const auto& g = cur[static_cast<std::size_t>(i)];
                for (const auto& p : s) {
                    std::int64_t ax = g.x0 + p.x, bx = g.x0 + g.nx - 1 + p.x;
                    std::int64_t ay = g.y0 + p.y, by = g.y0 + g.ny - 1 + p.y;
                    if (!any) {
                        lox = ax; hix = bx; loy = ay; hiy = by; any = true;
                    } else {
                        lox = std::min(lox, ax); hix = std::max(hix, bx);
                        loy = std::min(loy, ay); hiy = std::max(hiy, by);
                    }
                }
            }
            auto& ng = next[static_cast<std::size_t>(j)];
            if (!any) continue;
            ng.x0 = lox; ng.y0 = loy;
            ng.nx = hix - lox + 1; ng.ny = hiy - loy + 1;
            std::size_t cells = static_cast<std::size_t>(ng.nx) * static_cast<std::size_t>(ng.ny);
            if (cells > (std::size_t(1) << 28))
                throw SupportCapError("series_return_probs: dense window too large");
            ng.a.assign(cells, 0.0);
        }
        for (int i = 0; i < ns; ++i) {
            const auto& g = cur[static_cast<std::size_t>(i)];
            if (g.a.empty()) continue;
            for (int j = 0; j < ns; ++j) {
                if (m.P(i, j) <= 0.0) continue;
                const auto& s = supp[static_cast<std::size_t>(i * ns + j)];
                auto& ng = next[static_cast<std::size_t>(j)];
                double pij = m.P(i, j);
                for (const auto& p : s) {
                    double c = pij * p.mass;
                    for (std::int64_t y = 0; y < g.ny; ++y) {
                        const double* src = &g.a[static_cast<std::size_t>(y * g.nx)];
                        double* dst = &ng.a[static_cast<std::size_t>(
                            (g.y0 + y + p.y - ng.y0) * ng.nx + (g.x0 + p.x - ng.x0))];
                        for (std::int64_t x = 0; x < g.nx; ++x) dst[x] += c * src[x];
                    }
                }
                ops += static_cast<std::size_t>(g.nx) * static_cast<std::size_t>(g.ny) * s.size();
            }
        }
        if (ops > opts.dense_cost_cap)
            throw SupportCapError("series_return_probs: dense cost cap exceeded at n=" +
                                  std::to_string(step));
        cur = std::move(next);
        double hit = 0.0;
        for (int j = 0; j < ns; ++j) hit += cur[static_cast<std::size_t>(j)].at(0, 0);
        out.push_back(hit);
    }
    return out;
}

// certified torus aliasing bound: sum over both coordinates of
// 2 min_theta exp(N log MGF(theta) - theta M), exact MGF of the jump
double alias_bound(const std::vector<EdgeJump::Point>& pts, std::int64_t N, std::int64_t M) {
    double total = 0.0;
    for (int axis = 0; axis < 2; ++axis) {
        std::int64_t cmax = 0;
        for (const auto& p : pts) cmax = std::max(cmax, std::abs(axis == 0 ? p.x : p.y));
        if (cmax * N < M) continue; // unreachable: zero aliasing on this axis
        auto g = [&](double th) {
            // log MGF by direct sum (supports here are modest)
            double mx = 0.0;
            for (const auto& p : pts)
                mx = std::max(mx, th * static_cast<double>(axis == 0 ? p.x : p.y));
            double s = 0.0;
            for (const auto& p : pts)
                s += p.mass * std::exp(th * static_cast<double>(axis == 0 ? p.x : p.y) - mx);
            return static_cast<double>(N) * (mx + std::log(s)) - th * static_cast<double>(M);
        };
        double lo = 0.0, hi = 700.0 / static_cast<double>(cmax);
        for (int it = 0; it < 200; ++it) {
            double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
            if (g(a) < g(b)) hi = b; else lo = a;
        }
        total += 2.0 * std::exp(g(0.5 * (lo + hi)));
    }
    return total;
}

std::vector<double> return_probs_spectral(const MRWModel& m, std::int64_t N,
                                          const ReturnProbOptions& opts) {
    auto pts = edge_points(m.jumps[0][0]);
    if (!points_symmetric(pts))
        throw ContractError("series_return_probs: spectral path requires a symmetric jump law");

    std::int64_t M = 64;
    while (M <= 4096 && alias_bound(pts, N, M) > opts.alias_tol) M *= 2;
    if (M > 4096)
        throw SupportCapError("series_return_probs: no torus size meets the aliasing tolerance");

    // phi on the quarter grid (symmetric law: phi real and even per coordinate)
    std::int64_t H = M / 2;
    std::vector<std::pair<double, double>> vw; // (phi value, weight)
    vw.reserve(static_cast<std::size_t>((H + 1) * (H + 1)));
    for (std::int64_t a = 0; a <= H; ++a)
        for (std::int64_t b = 0; b <= H; ++b) {
            double tx = 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(M);
            double ty = 2.0 * std::numbers::pi * static_cast<double>(b) / static_cast<double>(M);
            double phi = 0.0;
            for (const auto& p : pts)
                phi += p.mass * std::cos(tx * static_cast<double>(p.x) +
                                         ty * static_cast<double>(p.y));
            double w = ((a == 0 || a == H) ? 1.0 : 2.0) * ((b == 0 || b == H) ? 1.0 : 2.0);
            vw.emplace_back(phi, w);
        }
    std::sort(vw.begin(), vw.end());
    std::vector<double> val, wt, pw;
    for (const auto& [v, w] : vw) {
        if (!val.empty() && val.back() == v)
            wt.back() += w;
        else {
            val.push_back(v);
            wt.push_back(w);
        }
    }
    pw.assign(val.size(), 1.0);

    double inv = 1.0 / (static_cast<double>(M) * static_cast<double>(M));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(N + 1));
    out.push_back(1.0);
    for (std::int64_t n = 1; n <= N; ++n) {
        double acc = 0.0;
        std::size_t k = val.size();
        for (std::size_t i = 0; i < k; ++i) {
            pw[i] *= val[i];
            acc += wt[i] * pw[i];
        }
        out.push_back(std::max(0.0, acc * inv));
        if ((n & 255) == 0) {
            // powers below 1e-20 never matter again (|phi| <= 1)
            std::size_t m2 = 0;
            for (std::size_t i = 0; i < k; ++i)
                if (std::abs(pw[i]) >= 1e-20) {
                    val[m2] = val[i];
                    wt[m2] = wt[i];
                    pw[m2] = pw[i];
                    ++m2;
                }
            val.resize(m2);
            wt.resize(m2);
            pw.resize(m2);
        }
    }
    return out;
}

} // namespace

std::vector<double> series_return_probs(const MRWModel& m, const Eigen::VectorXd& nu0,
                                        std::int64_t N, ReturnProbOptions opts) {
    if (N < 0) throw Error("series_return_probs: negative N");
    if (nu0.size() != m.size()) throw Error("series_return_probs: initial distribution shape");
    if (std::abs(nu0.sum() - 1.0) > 1e-9)
        throw Error("series_return_probs: initial distribution mass");
    if (!m.all_lattice())
        throw ContractError("series_return_probs: analytic jump laws have no lattice recursion");

    using Method = ReturnProbOptions::Method;
    Method method = opts.method;
    if (method == Method::Auto) {
        method = Method::Dense;
        if (m.size() == 1) {
            auto pts = edge_points(m.jumps[0][0]);
            std::int64_t c = 1;
            for (const auto& p : pts) c = std::max({c, std::abs(p.x), std::abs(p.y)});
            // window grows linearly: total dense cost ~ (4/3) N^3 c^2 |supp|
            double est = 1.34 * std::pow(static_cast<double>(N), 3.0) *
                         static_cast<double>(c * c) * static_cast<double>(pts.size());
            if (est > static_cast<double>(opts.dense_cost_cap) && points_symmetric(pts))
                method = Method::Spectral;
        }
    }
    if (method == Method::Spectral) {
        if (m.size() != 1)
            throw ContractError("series_return_probs: spectral path is single-state only");
        return return_probs_spectral(m, N, opts);
    }
    return return_probs_dense(m, nu0, N, opts);
}

// ---------------------------------------------------------------------------
// heavy-tail margin: two-sided tail T(n) = n^{-1/2}

namespace {

// zeta by Euler-Maclaurin for s > 0 (s != 1)
double zeta_em(double s) {
    const int N = 32;
    double acc = 0.0;
    for (int n = 1; n < N; ++n) acc += std::pow(n, -s);
    double Nd = N;
    acc += std::pow(Nd, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(Nd, -s);
    // B_2, B_4, ... correction terms
    static const double bern[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730};
    double fac = s, npow = std::pow(Nd, -s - 1.0);
    for (int j = 0; j < 6; ++j) {
        acc += bern[j] / std::tgamma(2.0 * j + 3.0) * fac * npow;
        fac *= (s + 2 * j + 1) * (s + 2 * j + 2);
        npow /= Nd * Nd;
    }
    return acc;
}

double zeta_any(double s) {
    if (s >= 0.5) return zeta_em(s);
    // functional equation
    return std::pow(2.0, s) * std::pow(std::numbers::pi, s - 1.0) *
           std::sin(std::numbers::pi * s / 2.0) * std::tgamma(1.0 - s) * zeta_em(1.0 - s);
}

const std::vector<double>& zeta_half_table() {
    static const std::vector<double> table = [] {
        std::vector<double> t(80);
        for (int k = 0; k < 80; ++k) t[static_cast<std::size_t>(k)] = zeta_any(0.5 - k);
        return t;
    }();
    return table;
}

} // namespace

double heavy_tail_charfn(double t) {
    t = std::remainder(t, 2.0 * std::numbers::pi);
    if (t == 0.0) return 1.0;
    // Li_{1/2}(e^{it}) = Gamma(1/2)(-it)^{-1/2} + sum_k zeta(1/2-k) (it)^k / k!
    cplx it(0.0, t);
    cplx li = std::sqrt(std::numbers::pi) * std::pow(-it, -0.5);
    const auto& z = zeta_half_table();
    cplx pw = 1.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
        cplx term = z[k] * pw;
        li += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(li)) && k > 4) break;
        pw *= it / static_cast<double>(k + 1);
    }
    // 1 - phi = Re[(e^{-it} - 1) Li]
    cplx emit = std::polar(1.0, -t) - 1.0;
    return 1.0 - (emit * li).real();
}

double heavy_tail_charfn_direct(double t, std::int64_t n_max) {
    double acc = 0.0, comp = 0.0;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        double m = 1.0 / std::sqrt(static_cast<double>(n)) -
                   1.0 / std::sqrt(static_cast<double>(n + 1));
        double y = m * std::cos(static_cast<double>(n) * t) - comp;
        double s = acc + y;
        comp = (s - acc) - y;
        acc = s;
    }
    return acc;
}

MRWModel heavy_tail_product_model() {
    auto chf = [](Vec2 t) { return cplx(heavy_tail_charfn(t.x) * heavy_tail_charfn(t.y), 0.0); };
    auto def = [](Vec2 t) {
        double dx = 1.0 - heavy_tail_charfn(t.x);
        double dy = 1.0 - heavy_tail_charfn(t.y);
        return cplx(dx + dy - dx * dy, 0.0);
    };
    return mrw_single(EdgeJump::analytic(chf, def));
}

} // namespace prw
