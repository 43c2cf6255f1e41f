#include "rmrelax/dynamics_limit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace rmrelax {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

inline cplx recip(cplx z) {
    const double n = std::norm(z);
    return {z.real() / n, -z.imag() / n};
}

// int over Im z = y (left to right) of e^{i sigma t z} / (c - z)^m, for t >= 0.
// At t = 0 this is the t -> 0+ limit, which matters only for m = 1.
cplx pole_integral(cplx c, int m, double t, int sigma, double y) {
    const bool above = c.imag() > y;
    if ((sigma > 0) != above) return 0.0;
    cplx power = 1.0;
    double factorial = 1.0;
    for (int k = 1; k < m; ++k) {
        power *= kI * (sigma * t);
        factorial *= k;
    }
    const double sign = (m % 2) ? -1.0 : 1.0;
    const cplx r = sign * 2.0 * kPi * kI * power * std::exp(kI * (sigma * t) * c) / factorial;
    return sigma > 0 ? r : -r;
}

struct Line {
    std::vector<double> x;
    std::vector<double> w;
    std::vector<unsigned char> inner;  // node lies in [-X, X]

    std::size_t size() const { return x.size(); }
};

// Nodes on [-2X, 2X] with panel widths resolving both e^{ixt} and features of
// width ~eta inside the band.
Line build_line(double band_lo, double band_hi, double X, double t, double eta, const ContourSpec& c) {
    const double oscillation = t > 0.0 ? 2.0 * kPi / t : HUGE_VAL;
    double h_band = std::min({oscillation, 3.0 * eta, 0.5});
    if (c.panels > 0) h_band = std::min(h_band, (band_hi - band_lo) / c.panels);
    const double h_out = std::min(oscillation, 1.0);

    std::vector<double> breaks{-2 * X, -X, band_lo, band_hi, X, 2 * X};
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    std::vector<double> panels;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double a = breaks[k], b = breaks[k + 1];
        const bool in_band = a >= band_lo && b <= band_hi;
        const double h = in_band ? h_band : h_out;
        const int count = std::max(1, static_cast<int>(std::ceil((b - a) / h - 1e-9)));
        for (int j = 0; j < count; ++j) panels.push_back(a + (b - a) * j / count);
    }
    panels.push_back(breaks.back());
    const quad::LineGrid g = quad::composite(panels, c.order);
    Line line{g.x, g.w, {}};
    line.inner.resize(line.size());
    for (std::size_t i = 0; i < line.size(); ++i) line.inner[i] = std::abs(line.x[i]) <= X;
    return line;
}

// Pairs at x + i eta, warm-started along the line; continuation in eta as fallback.
std::vector<StieltjesPair> line_pairs(const ModelParams& p, const std::vector<double>& x, double eta) {
    std::vector<StieltjesPair> out;
    out.reserve(x.size());
    std::optional<StieltjesPair> prev;
    for (double xi : x) {
        try {
            prev = solve_pair(p, {xi, eta}, {}, prev);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::no_convergence) throw;
            const std::array<double, 1> one{xi};
            prev = solve_on_grid(p, one, eta).front();
        }
        out.push_back(*prev);
    }
    return out;
}

struct Band {
    double lo, hi;
};

Band spectral_band(const ModelParams& p, double E) {
    const auto [lo, hi] = p.measure.support();
    const double reach = p.s + 2.0 * p.v + 1.0;
    return {std::min(lo - reach, E - 1.0), std::max(hi + reach, E + 1.0)};
}

double default_X(const Band& b) { return std::max(std::abs(b.lo), std::abs(b.hi)) + 10.0; }

struct Twin {
    cplx full = 0.0;
    cplx inner = 0.0;

    void add(cplx v, bool in) {
        full += v;
        if (in) inner += v;
    }
};

struct Pieces {
    Eigen::Matrix2cd full;
    Eigen::Matrix2cd inner;
    double min_denominator = HUGE_VAL;
    std::size_t nodes = 0;
};

// One-line integral (i / 2 pi) int_{R - i eta} e^{izt} g(z) dz for both U_E and u.
// g = diag over alpha of f_alpha(E, z) (resolvent = true) or f_alpha(z).
Pieces propagator_pieces(const ModelParams& p, double E, double t, double eta, double X, bool resolvent,
                         const ContourSpec& c) {
    const Band band = spectral_band(p, resolvent ? E : p.measure.mean());
    const Line line = build_line(band.lo, band.hi, X, t, eta, c);
    const auto pairs = line_pairs(p, line.x, eta);
    const double v2 = p.v * p.v;
    const double m0 = p.measure.mean();
    const double var0 = p.measure.variance();
    const cplx c2(resolvent ? E : m0, 1.0);

    Pieces out;
    out.nodes = line.size();
    for (int alpha : {+1, -1}) {
        const double pole = resolvent ? E + alpha * p.s : m0 + alpha * p.s;
        const double cubic = resolvent ? v2 : var0 + v2;
        Twin sum;
        for (std::size_t j = 0; j < line.size(); ++j) {
            const cplx z(line.x[j], -eta);
            const StieltjesPair pr = pairs[j].conj();
            const cplx g = resolvent ? recip(E + alpha * p.s - z - v2 * pr.f(-alpha)) : pr.f(alpha);
            const cplx d = c2 - z;
            const cplx rem = g - recip(pole - z) - cubic * recip(d * d * d);
            sum.add(line.w[j] * std::exp(kI * t * z) * rem, line.inner[j]);
        }
        const cplx analytic = pole_integral(pole, 1, t, +1, -eta) + cubic * pole_integral(c2, 3, t, +1, -eta);
        const int k = level(alpha);
        out.full(k, k) = kI / (2 * kPi) * (sum.full + analytic);
        out.inner(k, k) = kI / (2 * kPi) * (sum.inner + analytic);
    }
    out.full(0, 1) = out.full(1, 0) = out.inner(0, 1) = out.inner(1, 0) = 0.0;
    return out;
}

Eigen::Matrix2cd propagator(const ModelParams& p, double E, double t, bool resolvent, const ContourSpec& c) {
    p.validate();
    c.validate();
    if (!(t >= 0.0)) fail(ErrorKind::invalid_argument, "propagator needs t >= 0");
    const double eta = c.eta2 > 0.0 ? c.eta2 : default_eta(t);
    double X = c.X > 0.0 ? c.X : default_X(spectral_band(p, resolvent ? E : p.measure.mean()));
    double change = 0.0;
    for (int d = 0; d <= c.max_doublings; ++d, X *= 2) {
        const Pieces pc = propagator_pieces(p, E, t, eta, X, resolvent, c);
        change = (pc.full - pc.inner).cwiseAbs().maxCoeff();
        if (change < 0.5 * c.tol) return pc.full;
    }
    std::ostringstream os;
    os << "propagator quadrature did not settle: last truncation change " << change << " at X = " << X / 2;
    fail(ErrorKind::quadrature_budget_exceeded, os.str());
}

Pieces rho_pieces(const ModelParams& p, double E, double t, const TwoLevelState& rho0, double eta1,
                  double eta2, double X, const ContourSpec& c) {
    const Band band = spectral_band(p, E);
    const Line line = build_line(band.lo, band.hi, X, t, std::min(eta1, eta2), c);
    const std::size_t n = line.size();
    const auto pairs1 = line_pairs(p, line.x, eta1);
    const auto pairs2 = eta2 == eta1 ? pairs1 : line_pairs(p, line.x, eta2);

    const double s = p.s;
    const double v2 = p.v * p.v;
    const double v4 = v2 * v2;
    const double m0 = p.measure.mean();
    const cplx c1(E, -1.0);  // below L1
    const cplx c2(E, 1.0);   // above L2

    // Per-node data, index 0 for alpha = +, 1 for alpha = -.
    struct Node {
        cplx z;
        cplx f[2];   // f_a(z)
        cplx A[2];   // z - a s + v^2 f_{-a}(z)
        cplx F[2];   // f_a(E, z) = 1 / (E - A_a)
        cplx ew;     // weight times e^{-itz} (L1) or e^{itz} (L2)
    };
    std::vector<Node> n1(n), n2(n);
    for (std::size_t i = 0; i < n; ++i) {
        Node& a = n1[i];
        a.z = cplx(line.x[i], eta1);
        Node& b = n2[i];
        b.z = cplx(line.x[i], -eta2);
        const StieltjesPair q2 = pairs2[i].conj();
        for (int alpha : {+1, -1}) {
            const int k = level(alpha);
            a.f[k] = pairs1[i].f(alpha);
            b.f[k] = q2.f(alpha);
        }
        for (int alpha : {+1, -1}) {
            const int k = level(alpha), mk = level(-alpha);
            a.A[k] = a.z - alpha * s + v2 * a.f[mk];
            b.A[k] = b.z - alpha * s + v2 * b.f[mk];
            a.F[k] = recip(E - a.A[k]);
            b.F[k] = recip(E - b.A[k]);
        }
        a.ew = line.w[i] * std::exp(-kI * t * a.z);
        b.ew = line.w[i] * std::exp(kI * t * b.z);
    }

    // One-dimensional pieces on each line.
    std::array<Twin, 2> J1, J2, Ib, Ia, ib_box, ia_box;
    Twin k1_box, k2_box;
    std::array<cplx, 2> J1_an, J2_an, Ib_an, Ia_an;
    for (int alpha : {+1, -1}) {
        const int k = level(alpha), mk = level(-alpha);
        const double Ea = E + alpha * s;
        // Partial-fraction model 1 / ((pm - z)(pp - z)) of f_{-a}(E, z) f_a(z).
        const double M = 0.5 * (E - alpha * s + m0 + alpha * s);
        const double pm = M - 0.5, pp = M + 0.5;
        for (std::size_t i = 0; i < n; ++i) {
            const bool in = line.inner[i];
            {
                const Node& a = n1[i];
                const cplx d = c1 - a.z;
                J1[k].add(a.ew * (a.F[k] - recip(Ea - a.z) - v2 * recip(d * d * d)), in);
                const cplx bz = a.F[mk] * a.f[k];
                ib_box[k].add(a.ew * bz, in);
                Ib[k].add(a.ew * (bz - recip((pm - a.z) * (pp - a.z))), in);
            }
            {
                const Node& b = n2[i];
                const cplx d = c2 - b.z;
                J2[k].add(b.ew * (b.F[k] - recip(Ea - b.z) - v2 * recip(d * d * d)), in);
                const cplx az = b.F[mk] * b.f[k];
                ia_box[k].add(b.ew * az, in);
                Ia[k].add(b.ew * (az - recip((pm - b.z) * (pp - b.z))), in);
            }
        }
        J1_an[k] = pole_integral(Ea, 1, t, -1, eta1) + v2 * pole_integral(c1, 3, t, -1, eta1);
        J2_an[k] = pole_integral(Ea, 1, t, +1, -eta2) + v2 * pole_integral(c2, 3, t, +1, -eta2);
        Ib_an[k] = (pole_integral(pm, 1, t, -1, eta1) - pole_integral(pp, 1, t, -1, eta1)) / (pp - pm);
        Ia_an[k] = (pole_integral(pm, 1, t, +1, -eta2) - pole_integral(pp, 1, t, +1, -eta2)) / (pp - pm);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const cplx d1 = c1 - n1[i].z, d2 = c2 - n2[i].z;
        k1_box.add(n1[i].ew * recip(d1 * d1), line.inner[i]);
        k2_box.add(n2[i].ew * recip(d2 * d2), line.inner[i]);
    }
    const cplx K1 = pole_integral(c1, 2, t, -1, eta1);
    const cplx K2 = pole_integral(c2, 2, t, +1, -eta2);

    // Two-dimensional remainder: the non-separable part of the integrand.
    std::array<Twin, 4> G;  // entries (++, +-, -+, --)
    double min_den = HUGE_VAL;
    const Eigen::Matrix2cd& r0 = rho0.matrix();
    if (v2 > 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            const Node& a = n1[i];
            std::array<cplx, 4> row_full{}, row_inner{};
            for (std::size_t j = 0; j < n; ++j) {
                const Node& b = n2[j];
                cplx P[2][2];
                for (int x = 0; x < 2; ++x)
                    for (int y = 0; y < 2; ++y) P[x][y] = (a.f[x] - b.f[y]) * recip(a.A[x] - b.A[y]);
                const cplx q_same = v4 * P[0][0] * P[1][1];
                const cplx q_cross = v4 * P[0][1] * P[1][0];
                const cplx den_same = 1.0 - q_same, den_cross = 1.0 - q_cross;
                min_den = std::min({min_den, std::abs(den_same), std::abs(den_cross)});
                const cplx inv_same = recip(den_same), inv_cross = recip(den_cross);
                std::array<cplx, 4> g;
                for (int x = 0; x < 2; ++x) {
                    for (int y = 0; y < 2; ++y) {
                        const bool same = x == y;
                        const cplx q = same ? q_same : q_cross;
                        const cplx inv = same ? inv_same : inv_cross;
                        g[2 * x + y] = (a.F[x] * b.F[y] * r0(x, y) * q +
                                        v2 * a.F[1 - x] * b.F[1 - y] * P[x][y] * r0(1 - x, 1 - y)) *
                                       inv;
                    }
                }
                const bool in = line.inner[j];
                for (int e = 0; e < 4; ++e) {
                    const cplx term = b.ew * g[e];
                    row_full[e] += term;
                    if (in) row_inner[e] += term;
                }
            }
            for (int e = 0; e < 4; ++e) {
                G[e].full += a.ew * row_full[e];
                if (line.inner[i]) G[e].inner += a.ew * row_inner[e];
            }
        }
    } else {
        min_den = 1.0;
    }

    Pieces out;
    out.nodes = n;
    out.min_denominator = min_den;
    const double norm = 1.0 / (4.0 * kPi * kPi);
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            const cplx rbar = r0(1 - x, 1 - y);
            auto assemble = [&](auto pick) {
                const cplx j1 = pick(J1[x]) + J1_an[x];
                const cplx j2 = pick(J2[y]) + J2_an[y];
                const cplx ia = pick(Ia[y]) + Ia_an[y];
                const cplx ib = pick(Ib[x]) + Ib_an[x];
                const cplx k1b = pick(k1_box), k2b = pick(k2_box);
                const cplx sbox = v2 * rbar * (k1b * pick(ia_box[y]) + pick(ib_box[x]) * k2b - k1b * k2b);
                const cplx asym = v2 * rbar * (K1 * ia + ib * K2 - K1 * K2);
                return norm * (r0(x, y) * j1 * j2 + asym + pick(G[2 * x + y]) - sbox);
            };
            out.full(x, y) = assemble([](const Twin& w) { return w.full; });
            out.inner(x, y) = assemble([](const Twin& w) { return w.inner; });
        }
    }
    return out;
}

}  // namespace

void ContourSpec::validate() const {
    if (eta1 < 0.0 || eta2 < 0.0) fail(ErrorKind::invalid_argument, "contour offsets must be positive");
    if (X < 0.0) fail(ErrorKind::invalid_argument, "contour truncation X must be positive");
    if (!(tol > 0.0)) fail(ErrorKind::invalid_argument, "contour tol must be positive");
    if (order < 2) fail(ErrorKind::invalid_argument, "contour panel order must be >= 2");
    if (max_doublings < 0) fail(ErrorKind::invalid_argument, "max_doublings must be >= 0");
}

double default_eta(double t) { return std::min(0.5, 1.0 / (1.0 + std::max(t, 0.0))); }

Eigen::Matrix2cd f_E(const ModelParams& p, double E, cplx z, const StieltjesPair& pair) {
    const double v2 = p.v * p.v;
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    out(0, 0) = 1.0 / (E + p.s - z - v2 * pair.f_minus);
    out(1, 1) = 1.0 / (E - p.s - z - v2 * pair.f_plus);
    return out;
}

cplx two_point(const ModelParams& p, int beta, int gamma, const StieltjesPair& at_z1,
               const StieltjesPair& at_z2) {
    const double v2 = p.v * p.v;
    const cplx a = at_z1.z - beta * p.s + v2 * at_z1.f(-beta);
    const cplx b = at_z2.z - gamma * p.s + v2 * at_z2.f(-gamma);
    return integrate(p.measure, [&](double e) { return 1.0 / ((e - a) * (e - b)); }, 1e-15, 1e-12);
}

cplx two_point_resolved(const ModelParams& p, int beta, int gamma, const StieltjesPair& at_z1,
                        const StieltjesPair& at_z2) {
    const double v2 = p.v * p.v;
    const cplx a = at_z1.z - beta * p.s + v2 * at_z1.f(-beta);
    const cplx b = at_z2.z - gamma * p.s + v2 * at_z2.f(-gamma);
    if (a == b) return f0_derivative(p.measure, a);
    return (at_z1.f(beta) - at_z2.f(gamma)) / (a - b);
}

Eigen::Matrix2cd u_E(const ModelParams& p, double E, double t, const ContourSpec& c) {
    return propagator(p, E, t, true, c);
}

Eigen::Matrix2cd u_mean(const ModelParams& p, double t, const ContourSpec& c) {
    return propagator(p, 0.0, t, false, c);
}

RhoResult rho_limit_detailed(const ModelParams& p, double E, double t, const TwoLevelState& rho0,
                             const ContourSpec& c) {
    p.validate();
    c.validate();
    if (!(t >= 0.0)) fail(ErrorKind::invalid_argument, "rho_limit needs t >= 0");
    double eta1 = c.eta1 > 0.0 ? c.eta1 : default_eta(t);
    double eta2 = c.eta2 > 0.0 ? c.eta2 : default_eta(t);
    const double X0 = c.X > 0.0 ? c.X : default_X(spectral_band(p, E));
    const auto [lo, hi] = p.measure.support();

    RhoDiagnostics diag;
    diag.outside_support = E < lo || E > hi;
    for (int widen = 0; widen < 2; ++widen) {
        double X = X0;
        bool retry = false;
        for (int d = 0; d <= c.max_doublings; ++d, X *= 2) {
            const Pieces pc = rho_pieces(p, E, t, rho0, eta1, eta2, X, c);
            if (pc.min_denominator < 1e-6) {
                if (widen == 0) {
                    eta1 *= 2;
                    eta2 *= 2;
                    retry = true;
                    break;
                }
                std::ostringstream os;
                os << "|1 - v^4 f f| = " << pc.min_denominator << " on the contour at eta = (" << eta1 << ", "
                   << eta2 << ")";
                fail(ErrorKind::denominator_near_zero, os.str());
            }
            const double change = (pc.full - pc.inner).cwiseAbs().maxCoeff();
            diag.truncation_change = change;
            if (change < 0.5 * c.tol) {
                diag.eta1 = eta1;
                diag.eta2 = eta2;
                diag.X = 2 * X;
                diag.min_denominator = pc.min_denominator;
                diag.nodes = pc.nodes;
                diag.doublings = d;
                return {TwoLevelState(pc.full), diag};
            }
        }
        if (!retry) {
            std::ostringstream os;
            os << "rho_limit quadrature did not settle at t = " << t << ": truncation change "
               << diag.truncation_change << " after " << c.max_doublings << " doublings";
            fail(ErrorKind::quadrature_budget_exceeded, os.str());
        }
    }
    fail(ErrorKind::denominator_near_zero, "contour widening did not help");
}

Trajectory evolve(const ModelParams& p, double E, std::span<const double> times, const TwoLevelState& rho0,
                  const ContourSpec& c) {
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) fail(ErrorKind::invalid_argument, "times must be strictly increasing");
    Trajectory traj;
    traj.meta = {{"s", p.s}, {"v", p.v}, {"E", E}, {"measure", describe(p.measure)}, {"tol", c.tol}};
    nlohmann::json per_time = nlohmann::json::array();
    bool outside = false;
    for (double t : times) {
        const RhoResult r = rho_limit_detailed(p, E, t, rho0, c);
        traj.times.push_back(t);
        traj.states.push_back(r.state);
        outside = r.diagnostics.outside_support;
        per_time.push_back({{"t", t},
                            {"eta1", r.diagnostics.eta1},
                            {"eta2", r.diagnostics.eta2},
                            {"X", r.diagnostics.X},
                            {"nodes", r.diagnostics.nodes},
                            {"truncation_change", r.diagnostics.truncation_change},
                            {"min_denominator", r.diagnostics.min_denominator}});
    }
    traj.meta["outside_support"] = outside;
    traj.meta["quadrature"] = per_time;
    return traj;
}

}  // namespace rmrelax
