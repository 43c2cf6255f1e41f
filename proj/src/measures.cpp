#include "rmrelax/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace rmrelax {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_offaxis(cplx z) {
    if (z.imag() == 0.0) {
        std::ostringstream os;
        os << "Stieltjes transform evaluated on the real axis at " << z.real()
           << "; use f0_boundary";
        fail(ErrorKind::real_axis_evaluation, os.str());
    }
}

// log(b - z) - log(a - z): no branch jump for Im z != 0.
cplx log_ratio(double a, double b, cplx z) { return std::log(b - z) - std::log(a - z); }

// sqrt(z - r) sqrt(z + r): the branch of sqrt(z^2 - r^2) that behaves like z at infinity.
cplx semicircle_root(cplx z, double r) { return std::sqrt(z - r) * std::sqrt(z + r); }

double gaussian_raw(const measure::Gaussian& g, double e) {
    const double y = (e - g.center) / g.sigma;
    if (std::abs(y) > g.half_width) return 0.0;
    return g.norm * std::exp(-0.5 * y * y);
}

// Segment i of a tabulated density as value-at-left plus slope.
struct Segment {
    double a, b, va, slope;
};

Segment segment(const measure::Tabulated& t, std::size_t i) {
    const double a = t.grid[i];
    const double b = t.grid[i + 1];
    return {a, b, t.values[i], (t.values[i + 1] - t.values[i]) / (b - a)};
}

// Singularity-subtracted Stieltjes integral of a smooth density on [a, b]:
//   int (p(E) - p(x) - p'(x)(E - x)) / (E - z) dE + p(x) L + p'(x) ((b - a) + (z - x) L)
// with x = Re z clamped to [a, b] and L = log(b - z) - log(a - z).
template <class Density, class Slope>
cplx subtracted_stieltjes(const Density& p, const Slope& dp, double a, double b, cplx z) {
    const double x = std::clamp(z.real(), a, b);
    const double px = p(x);
    const double dpx = dp(x);
    auto integrand = [&](double e) -> cplx {
        const double num = p(e) - px - dpx * (e - x);
        return num / (e - z);
    };
    const std::array<double, 3> breaks{a, x, b};
    std::vector<double> br(breaks.begin(), breaks.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    const cplx rest = quad::adaptive(integrand, std::span<const double>(br), 1e-14, 1e-11, 20000).value;
    const cplx L = log_ratio(a, b, z);
    return rest + px * L + dpx * ((b - a) + (z - x) * L);
}

template <class Density, class Slope>
cplx subtracted_stieltjes_derivative(const Density& p, const Slope& dp, double a, double b,
                                     cplx z) {
    const double x = std::clamp(z.real(), a, b);
    const double px = p(x);
    const double dpx = dp(x);
    auto integrand = [&](double e) -> cplx {
        const double num = p(e) - px - dpx * (e - x);
        const cplx d = e - z;
        return num / (d * d);
    };
    std::vector<double> br{a, x, b};
    br.erase(std::unique(br.begin(), br.end()), br.end());
    const cplx rest = quad::adaptive(integrand, std::span<const double>(br), 1e-13, 1e-10, 20000).value;
    const cplx L = log_ratio(a, b, z);
    const cplx inv_diff = 1.0 / (a - z) - 1.0 / (b - z);  // int dE / (E - z)^2
    // int (E - x) / (E - z)^2 = L + (z - x) inv_diff
    return rest + px * inv_diff + dpx * (L + (z - x) * inv_diff);
}

// Principal value of int p(E) / (E - lambda) over [a, b], lambda interior.
template <class Density, class Slope>
double subtracted_pv(const Density& p, const Slope& dp, double a, double b, double lambda) {
    if (lambda <= a || lambda >= b) {
        auto integrand = [&](double e) { return p(e) / (e - lambda); };
        return quad::adaptive(integrand, a, b, 1e-14, 1e-11, 20000).value;
    }
    const double pl = p(lambda);
    const double dpl = dp(lambda);
    auto integrand = [&](double e) { return (p(e) - pl - dpl * (e - lambda)) / (e - lambda); };
    const std::array<double, 3> br{a, lambda, b};
    const double rest =
        quad::adaptive(integrand, std::span<const double>(br), 1e-14, 1e-11, 20000).value;
    return rest + pl * std::log(std::abs((b - lambda) / (lambda - a))) + dpl * (b - a);
}

}  // namespace

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_argument: return "InvalidArgument";
        case ErrorKind::non_normalizable: return "NonNormalizable";
        case ErrorKind::non_monotone_grid: return "NonMonotoneGrid";
        case ErrorKind::negative_density: return "NegativeDensity";
        case ErrorKind::real_axis_evaluation: return "RealAxisEvaluation";
        case ErrorKind::atomic_measure: return "AtomicMeasure";
        case ErrorKind::divergent_tail: return "DivergentTail";
        case ErrorKind::no_convergence: return "NoConvergence";
        case ErrorKind::mass_deficit: return "MassDeficit";
        case ErrorKind::empty_window: return "EmptyWindow";
        case ErrorKind::window_out_of_range: return "WindowOutOfRange";
        case ErrorKind::tail_overflow: return "TailOverflow";
        case ErrorKind::quadrature_budget_exceeded: return "QuadratureBudgetExceeded";
        case ErrorKind::denominator_near_zero: return "DenominatorNearZero";
        case ErrorKind::eigendecomposition_failure: return "EigendecompositionFailure";
        case ErrorKind::spectrum_out_of_range: return "SpectrumOutOfRange";
        case ErrorKind::zero_rate: return "ZeroRate";
        case ErrorKind::parse_error: return "ParseError";
        case ErrorKind::validation_error: return "ValidationError";
        case ErrorKind::missing_column: return "MissingColumn";
        case ErrorKind::io_error: return "IoError";
    }
    return "Unknown";
}

// ---------------------------------------------------------------------------
// Construction

SpectralMeasure SpectralMeasure::atoms(std::vector<Atom> atoms) {
    if (atoms.empty()) fail(ErrorKind::non_normalizable, "atomic measure needs at least one atom");
    double total = 0.0;
    for (const Atom& a : atoms) {
        if (!(a.weight >= 0.0) || !std::isfinite(a.location))
            fail(ErrorKind::negative_density, "atom weights must be finite and nonnegative");
        total += a.weight;
    }
    if (!(total > 0.0)) fail(ErrorKind::non_normalizable, "atom weights sum to zero");
    for (Atom& a : atoms) a.weight /= total;
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const Atom& x, const Atom& y) { return x.location < y.location; });
    return SpectralMeasure(measure::Atoms{std::move(atoms)});
}

SpectralMeasure SpectralMeasure::semicircle(double radius, double center) {
    if (!(radius > 0.0)) fail(ErrorKind::invalid_argument, "semicircle radius must be positive");
    return SpectralMeasure(measure::Semicircle{radius, center});
}

SpectralMeasure SpectralMeasure::uniform(double a, double b) {
    if (!(a < b)) fail(ErrorKind::invalid_argument, "uniform measure needs a < b");
    return SpectralMeasure(measure::Uniform{a, b});
}

SpectralMeasure SpectralMeasure::gaussian(double sigma, double half_width, double center) {
    if (!(sigma > 0.0)) fail(ErrorKind::invalid_argument, "gaussian sigma must be positive");
    if (!(half_width > 0.0))
        fail(ErrorKind::invalid_argument, "gaussian truncation half-width must be positive");
    measure::Gaussian g{sigma, half_width, center, 0.0};
    g.norm = 1.0 / (sigma * std::sqrt(2.0 * kPi) * std::erf(half_width / kSqrt2));
    return SpectralMeasure(g);
}

SpectralMeasure SpectralMeasure::tabulated(std::vector<double> grid, std::vector<double> values) {
    if (grid.size() != values.size() || grid.size() < 2)
        fail(ErrorKind::invalid_argument, "tabulated density needs >= 2 grid points and matching values");
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i + 1] > grid[i]))
            fail(ErrorKind::non_monotone_grid, "tabulated grid must be strictly increasing");
    for (double v : values)
        if (!(v >= 0.0) || !std::isfinite(v))
            fail(ErrorKind::negative_density, "tabulated density values must be nonnegative");
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        mass += 0.5 * (values[i] + values[i + 1]) * (grid[i + 1] - grid[i]);
    if (!(mass > 0.0)) fail(ErrorKind::non_normalizable, "tabulated density has zero mass");
    for (double& v : values) v /= mass;
    return SpectralMeasure(measure::Tabulated{std::move(grid), std::move(values)});
}

SpectralMeasure make_measure(const nlohmann::json& spec) {
    if (!spec.is_object() || !spec.contains("type"))
        fail(ErrorKind::validation_error, "measure: expected an object with a \"type\" key");
    const std::string type = spec.at("type").get<std::string>();
    auto num = [&](const char* key, double fallback) {
        return spec.contains(key) ? spec.at(key).get<double>() : fallback;
    };
    if (type == "atoms") {
        std::vector<Atom> atoms;
        for (const auto& item : spec.at("atoms")) {
            if (item.is_array())
                atoms.push_back({item.at(0).get<double>(), item.at(1).get<double>()});
            else
                atoms.push_back({item.at("location").get<double>(), item.at("weight").get<double>()});
        }
        return SpectralMeasure::atoms(std::move(atoms));
    }
    if (type == "semicircle") return SpectralMeasure::semicircle(num("radius", 2.0), num("center", 0.0));
    if (type == "uniform") return SpectralMeasure::uniform(num("a", -1.0), num("b", 1.0));
    if (type == "gaussian")
        return SpectralMeasure::gaussian(num("sigma", 1.0), num("half_width", 8.0), num("center", 0.0));
    if (type == "tabulated")
        return SpectralMeasure::tabulated(spec.at("grid").get<std::vector<double>>(),
                                          spec.at("values").get<std::vector<double>>());
    fail(ErrorKind::validation_error, "measure: unknown type \"" + type + "\"");
}

nlohmann::json describe(const SpectralMeasure& m) {
    return std::visit(
        overloaded{
            [](const measure::Atoms& a) {
                nlohmann::json atoms = nlohmann::json::array();
                for (const Atom& x : a.atoms) atoms.push_back({x.location, x.weight});
                return nlohmann::json{{"type", "atoms"}, {"atoms", atoms}};
            },
            [](const measure::Semicircle& s) {
                return nlohmann::json{{"type", "semicircle"}, {"radius", s.radius}, {"center", s.center}};
            },
            [](const measure::Uniform& u) {
                return nlohmann::json{{"type", "uniform"}, {"a", u.a}, {"b", u.b}};
            },
            [](const measure::Gaussian& g) {
                return nlohmann::json{{"type", "gaussian"},
                                      {"sigma", g.sigma},
                                      {"half_width", g.half_width},
                                      {"center", g.center}};
            },
            [](const measure::Tabulated& t) {
                return nlohmann::json{{"type", "tabulated"}, {"grid", t.grid}, {"values", t.values}};
            },
        },
        m.variant());
}

// ---------------------------------------------------------------------------
// Pointwise properties

MeasureKind SpectralMeasure::kind() const { return static_cast<MeasureKind>(data_.index()); }

double SpectralMeasure::density(double e) const {
    return std::visit(
        overloaded{
            [](const measure::Atoms&) { return 0.0; },
            [e](const measure::Semicircle& s) {
                const double x = e - s.center;
                if (std::abs(x) >= s.radius) return 0.0;
                return 2.0 / (kPi * s.radius * s.radius) * std::sqrt(s.radius * s.radius - x * x);
            },
            [e](const measure::Uniform& u) { return (e >= u.a && e <= u.b) ? 1.0 / (u.b - u.a) : 0.0; },
            [e](const measure::Gaussian& g) { return gaussian_raw(g, e); },
            [e](const measure::Tabulated& t) {
                if (e < t.grid.front() || e > t.grid.back()) return 0.0;
                auto it = std::upper_bound(t.grid.begin(), t.grid.end(), e);
                std::size_t i = static_cast<std::size_t>(it - t.grid.begin());
                if (i >= t.grid.size()) return t.values.back();
                const Segment s = segment(t, i - 1);
                return s.va + s.slope * (e - s.a);
            },
        },
        data_);
}

double SpectralMeasure::density_slope(double e) const {
    return std::visit(
        overloaded{
            [](const measure::Atoms&) { return 0.0; },
            [e](const measure::Semicircle& s) {
                const double x = e - s.center;
                if (std::abs(x) >= s.radius) return 0.0;
                return -2.0 / (kPi * s.radius * s.radius) * x / std::sqrt(s.radius * s.radius - x * x);
            },
            [](const measure::Uniform&) { return 0.0; },
            [e](const measure::Gaussian& g) {
                const double y = (e - g.center) / g.sigma;
                return -y / g.sigma * gaussian_raw(g, e);
            },
            [e](const measure::Tabulated& t) {
                if (e < t.grid.front() || e > t.grid.back()) return 0.0;
                auto it = std::upper_bound(t.grid.begin(), t.grid.end(), e);
                std::size_t i = static_cast<std::size_t>(it - t.grid.begin());
                if (i >= t.grid.size()) i = t.grid.size() - 1;
                return segment(t, i - 1).slope;
            },
        },
        data_);
}

double SpectralMeasure::sup_density() const {
    return std::visit(
        overloaded{
            [](const measure::Atoms&) { return std::numeric_limits<double>::infinity(); },
            [](const measure::Semicircle& s) { return 2.0 / (kPi * s.radius); },
            [](const measure::Uniform& u) { return 1.0 / (u.b - u.a); },
            [](const measure::Gaussian& g) { return g.norm; },
            [](const measure::Tabulated& t) { return *std::max_element(t.values.begin(), t.values.end()); },
        },
        data_);
}

std::pair<double, double> SpectralMeasure::support() const {
    return std::visit(
        overloaded{
            [](const measure::Atoms& a) {
                return std::pair{a.atoms.front().location, a.atoms.back().location};
            },
            [](const measure::Semicircle& s) {
                return std::pair{s.center - s.radius, s.center + s.radius};
            },
            [](const measure::Uniform& u) { return std::pair{u.a, u.b}; },
            [](const measure::Gaussian& g) {
                return std::pair{g.center - g.half_width * g.sigma, g.center + g.half_width * g.sigma};
            },
            [](const measure::Tabulated& t) { return std::pair{t.grid.front(), t.grid.back()}; },
        },
        data_);
}

std::vector<double> SpectralMeasure::breakpoints() const {
    if (const auto* t = std::get_if<measure::Tabulated>(&data_)) return t->grid;
    if (const auto* g = std::get_if<measure::Gaussian>(&data_)) {
        const auto [lo, hi] = support();
        // Split near the bulk so the adaptive rule sees the peak.
        return {lo, g->center - g->sigma, g->center + g->sigma, hi};
    }
    if (const auto* a = std::get_if<measure::Atoms>(&data_)) {
        std::vector<double> out;
        for (const Atom& x : a->atoms) out.push_back(x.location);
        return out;
    }
    const auto [lo, hi] = support();
    return {lo, hi};
}

double SpectralMeasure::mean() const {
    return std::visit(
        overloaded{
            [](const measure::Atoms& a) {
                double m = 0.0;
                for (const Atom& x : a.atoms) m += x.weight * x.location;
                return m;
            },
            [](const measure::Semicircle& s) { return s.center; },
            [](const measure::Uniform& u) { return 0.5 * (u.a + u.b); },
            [](const measure::Gaussian& g) { return g.center; },
            [](const measure::Tabulated& t) {
                // Exact for piecewise-linear densities.
                double m = 0.0;
                for (std::size_t i = 0; i + 1 < t.grid.size(); ++i) {
                    const double a = t.grid[i], b = t.grid[i + 1];
                    const double va = t.values[i], vb = t.values[i + 1];
                    m += (b - a) * (va * (2 * a + b) + vb * (a + 2 * b)) / 6.0;
                }
                return m;
            },
        },
        data_);
}

double SpectralMeasure::variance() const {
    return std::visit(
        overloaded{
            [](const measure::Atoms& a) {
                double m = 0.0, m2 = 0.0;
                for (const Atom& x : a.atoms) {
                    m += x.weight * x.location;
                    m2 += x.weight * x.location * x.location;
                }
                return m2 - m * m;
            },
            [](const measure::Semicircle& s) { return 0.25 * s.radius * s.radius; },
            [](const measure::Uniform& u) { return (u.b - u.a) * (u.b - u.a) / 12.0; },
            [](const measure::Gaussian& g) {
                const double w = g.half_width;
                const double phi = std::exp(-0.5 * w * w) / std::sqrt(2.0 * kPi);
                return g.sigma * g.sigma * (1.0 - 2.0 * w * phi / std::erf(w / kSqrt2));
            },
            [this](const measure::Tabulated& t) {
                const double mu = mean();
                double v = 0.0;
                const quad::Rule& r = quad::gauss_legendre(3);  // exact for cubics
                for (std::size_t i = 0; i + 1 < t.grid.size(); ++i) {
                    const Segment s = segment(t, i);
                    const double c = 0.5 * (s.a + s.b), h = 0.5 * (s.b - s.a);
                    for (int k = 0; k < 3; ++k) {
                        const double e = c + h * r.nodes[k];
                        v += h * r.weights[k] * (s.va + s.slope * (e - s.a)) * (e - mu) * (e - mu);
                    }
                }
                return v;
            },
        },
        data_);
}

double SpectralMeasure::cdf(double e) const {
    return std::visit(
        overloaded{
            [e](const measure::Atoms& a) {
                double c = 0.0;
                for (const Atom& x : a.atoms)
                    if (x.location <= e) c += x.weight;
                return std::min(c, 1.0);
            },
            [e](const measure::Semicircle& s) {
                const double x = (e - s.center) / s.radius;
                if (x <= -1.0) return 0.0;
                if (x >= 1.0) return 1.0;
                return 0.5 + (x * std::sqrt(1.0 - x * x) + std::asin(x)) / kPi;
            },
            [e](const measure::Uniform& u) { return std::clamp((e - u.a) / (u.b - u.a), 0.0, 1.0); },
            [e](const measure::Gaussian& g) {
                const double y = std::clamp((e - g.center) / g.sigma, -g.half_width, g.half_width);
                const double ew = std::erf(g.half_width / kSqrt2);
                return std::clamp(0.5 * (std::erf(y / kSqrt2) + ew) / ew, 0.0, 1.0);
            },
            [e](const measure::Tabulated& t) {
                if (e <= t.grid.front()) return 0.0;
                double c = 0.0;
                for (std::size_t i = 0; i + 1 < t.grid.size(); ++i) {
                    const Segment s = segment(t, i);
                    if (e >= s.b) {
                        c += 0.5 * (t.values[i] + t.values[i + 1]) * (s.b - s.a);
                    } else {
                        const double d = e - s.a;
                        c += s.va * d + 0.5 * s.slope * d * d;
                        break;
                    }
                }
                return std::clamp(c, 0.0, 1.0);
            },
        },
        data_);
}

SpectralMeasure SpectralMeasure::shifted(double c) const {
    return std::visit(
        overloaded{
            [c](measure::Atoms a) {
                for (Atom& x : a.atoms) x.location += c;
                return SpectralMeasure(std::move(a));
            },
            [c](measure::Semicircle s) {
                s.center += c;
                return SpectralMeasure(s);
            },
            [c](measure::Uniform u) {
                u.a += c;
                u.b += c;
                return SpectralMeasure(u);
            },
            [c](measure::Gaussian g) {
                g.center += c;
                return SpectralMeasure(g);
            },
            [c](measure::Tabulated t) {
                for (double& x : t.grid) x += c;
                return SpectralMeasure(std::move(t));
            },
        },
        data_);
}

// ---------------------------------------------------------------------------
// Transforms

cplx f0(const SpectralMeasure& m, cplx z) {
    require_offaxis(z);
    return std::visit(
        overloaded{
            [z](const measure::Atoms& a) {
                cplx sum = 0.0;
                for (const Atom& x : a.atoms) sum += x.weight / (x.location - z);
                return sum;
            },
            [z](const measure::Semicircle& s) {
                const cplx w = z - s.center;
                return 2.0 / (s.radius * s.radius) * (-w + semicircle_root(w, s.radius));
            },
            [z](const measure::Uniform& u) { return log_ratio(u.a, u.b, z) / (u.b - u.a); },
            [z, &m](const measure::Gaussian& g) {
                const auto [lo, hi] = m.support();
                return subtracted_stieltjes([&](double e) { return gaussian_raw(g, e); },
                                            [&](double e) { return m.density_slope(e); }, lo, hi, z);
            },
            [z](const measure::Tabulated& t) {
                cplx sum = 0.0;
                for (std::size_t i = 0; i + 1 < t.grid.size(); ++i) {
                    const Segment s = segment(t, i);
                    const cplx pz = s.va + s.slope * (z - s.a);
                    sum += pz * log_ratio(s.a, s.b, z) + s.slope * (s.b - s.a);
                }
                return sum;
            },
        },
        m.variant());
}

cplx f0_derivative(const SpectralMeasure& m, cplx z) {
    require_offaxis(z);
    return std::visit(
        overloaded{
            [z](const measure::Atoms& a) {
                cplx sum = 0.0;
                for (const Atom& x : a.atoms) {
                    const cplx d = x.location - z;
                    sum += x.weight / (d * d);
                }
                return sum;
            },
            [z](const measure::Semicircle& s) {
                const cplx w = z - s.center;
                return 2.0 / (s.radius * s.radius) * (-1.0 + w / semicircle_root(w, s.radius));
            },
            [z](const measure::Uniform& u) {
                return (1.0 / (u.a - z) - 1.0 / (u.b - z)) / (u.b - u.a);
            },
            [z, &m](const measure::Gaussian& g) {
                const auto [lo, hi] = m.support();
                return subtracted_stieltjes_derivative([&](double e) { return gaussian_raw(g, e); },
                                                       [&](double e) { return m.density_slope(e); },
                                                       lo, hi, z);
            },
            [z](const measure::Tabulated& t) {
                cplx sum = 0.0;
                for (std::size_t i = 0; i + 1 < t.grid.size(); ++i) {
                    const Segment s = segment(t, i);
                    const cplx pz = s.va + s.slope * (z - s.a);
                    sum += s.slope * log_ratio(s.a, s.b, z) + pz * (1.0 / (s.a - z) - 1.0 / (s.b - z));
                }
                return sum;
            },
        },
        m.variant());
}

BoundaryValue f0_boundary(const SpectralMeasure& m, double lambda, Side side) {
    const double sgn = static_cast<double>(static_cast<int>(side));
    const double pv = std::visit(
        overloaded{
            [](const measure::Atoms&) -> double {
                fail(ErrorKind::atomic_measure, "boundary values are undefined for an atomic measure");
            },
            [lambda](const measure::Semicircle& s) {
                const double x = lambda - s.center;
                const double r2 = s.radius * s.radius;
                if (std::abs(x) < s.radius) return -2.0 * x / r2;
                return 2.0 / r2 * (-x + std::copysign(std::sqrt(x * x - r2), x));
            },
            [lambda](const measure::Uniform& u) {
                return std::log(std::abs((u.b - lambda) / (u.a - lambda))) / (u.b - u.a);
            },
            [lambda, &m](const measure::Gaussian& g) {
                const auto [lo, hi] = m.support();
                return subtracted_pv([&](double e) { return gaussian_raw(g, e); },
                                     [&](double e) { return m.density_slope(e); }, lo, hi, lambda);
            },
            [lambda](const measure::Tabulated& t) {
                // Sum of per-segment  slope (b - a) + p(lambda) ln|b - lambda| - p(lambda) ln|a - lambda|.
                // Logs of coincident nodes cancel between neighbouring segments.
                double sum = 0.0;
                for (std::size_t i = 0; i + 1 < t.grid.size(); ++i) {
                    const Segment s = segment(t, i);
                    const double pl = s.va + s.slope * (lambda - s.a);
                    sum += s.slope * (s.b - s.a);
                    const double db = std::abs(s.b - lambda);
                    const double da = std::abs(s.a - lambda);
                    const bool interior_b = i + 2 < t.grid.size();
                    const bool interior_a = i > 0;
                    if (db > 0.0) sum += pl * std::log(db);
                    else if (!interior_b && pl != 0.0) return std::copysign(HUGE_VAL, -pl);
                    if (da > 0.0) sum -= pl * std::log(da);
                    else if (!interior_a && pl != 0.0) return std::copysign(HUGE_VAL, pl);
                }
                return sum;
            },
        },
        m.variant());
    return {pv, sgn * kPi * m.density(lambda), side};
}

cplx fourier_hat(const SpectralMeasure& m, double u) {
    if (u == 0.0) return 1.0;
    const cplx I(0.0, 1.0);
    return std::visit(
        overloaded{
            [&](const measure::Atoms& a) {
                cplx sum = 0.0;
                for (const Atom& x : a.atoms) sum += x.weight * std::exp(-I * u * x.location);
                return sum;
            },
            [&](const measure::Semicircle& s) {
                const double x = std::abs(u) * s.radius;
                return std::exp(-I * u * s.center) * (2.0 * std::cyl_bessel_j(1.0, x) / x);
            },
            [&](const measure::Uniform& uu) {
                const double half = 0.5 * u * (uu.b - uu.a);
                return std::exp(-I * u * 0.5 * (uu.a + uu.b)) * (std::sin(half) / half);
            },
            [&](const measure::Gaussian& g) {
                // Symmetric about the center: only the cosine part survives.
                const double w = g.half_width * g.sigma;
                const int panels = 8 + static_cast<int>(std::ceil(std::abs(u) * w / kPi));
                std::vector<double> br(panels + 1);
                for (int p = 0; p <= panels; ++p) br[p] = w * p / panels;
                const quad::LineGrid grid = quad::composite(br, 16);
                double sum = 0.0;
                for (std::size_t k = 0; k < grid.size(); ++k)
                    sum += grid.w[k] * std::cos(u * grid.x[k]) * gaussian_raw(g, g.center + grid.x[k]);
                return std::exp(-I * u * g.center) * (2.0 * sum);
            },
            [&](const measure::Tabulated& t) {
                cplx sum = 0.0;
                for (std::size_t i = 0; i + 1 < t.grid.size(); ++i) {
                    const Segment s = segment(t, i);
                    const int panels = 1 + static_cast<int>(std::ceil(std::abs(u) * (s.b - s.a) / kPi));
                    std::vector<double> br(panels + 1);
                    for (int p = 0; p <= panels; ++p) br[p] = s.a + (s.b - s.a) * p / panels;
                    const quad::LineGrid grid = quad::composite(br, 8);
                    for (std::size_t k = 0; k < grid.size(); ++k)
                        sum += grid.w[k] * (s.va + s.slope * (grid.x[k] - s.a)) *
                               std::exp(-I * u * grid.x[k]);
                }
                return sum;
            },
        },
        m.variant());
}

C0Estimate c0_bound(const SpectralMeasure& m, double cap, double tail_tol) {
    if (!m.has_density())
        fail(ErrorKind::atomic_measure, "c0 is defined for measures with an integrable density");
    if (!(cap > 0.0)) fail(ErrorKind::invalid_argument, "c0_bound: cap must be positive");
    const auto [lo, hi] = m.support();
    const double width = std::max(hi - lo, 1e-12);
    // Panels narrow enough to follow the zeros of |hat nu|.
    const double h = std::min(0.25, kPi / (4.0 * width));
    const int panels = static_cast<int>(std::ceil(cap / h));
    std::vector<double> br(panels + 1);
    for (int p = 0; p <= panels; ++p) br[p] = cap * p / panels;
    const quad::LineGrid grid = quad::composite(br, 16);

    double integral = 0.0;
    double window_mid = 0.0;   // int over [cap/4, cap/2]
    double window_far = 0.0;   // int over [cap/2, cap]
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double a = std::abs(fourier_hat(m, grid.x[k]));
        integral += grid.w[k] * a;
        if (grid.x[k] >= 0.25 * cap && grid.x[k] < 0.5 * cap) window_mid += grid.w[k] * a;
        if (grid.x[k] >= 0.5 * cap) window_far += grid.w[k] * a;
    }
    integral *= 2.0;  // |hat nu(-u)| = |hat nu(u)| for a real density

    C0Estimate out;
    out.integral = integral;
    const double mean_mid = window_mid / (0.25 * cap);
    const double mean_far = window_far / (0.5 * cap);
    if (mean_far < 1e-300 || mean_mid < 1e-300) {
        out.decay_exponent = std::numeric_limits<double>::infinity();
        out.tail = 0.0;
    } else {
        const double p = std::log2(mean_mid / mean_far);
        out.decay_exponent = p;
        if (p <= 1.05) {
            std::ostringstream os;
            os << "c0 tail diverges: |hat nu(u)| decays like u^-" << p << " near u = " << cap;
            fail(ErrorKind::divergent_tail, os.str());
        }
        // Fit C u^{-p} to the far-window mean, integrate from cap to infinity, both signs.
        const double half = 0.5 * cap;
        const double window_integral = (std::pow(cap, 1.0 - p) - std::pow(half, 1.0 - p)) / (1.0 - p);
        const double C = window_far / window_integral;
        out.tail = 2.0 * C * std::pow(cap, 1.0 - p) / (p - 1.0);
    }
    out.value = out.integral + out.tail;
    if (out.tail > tail_tol * out.value) {
        std::ostringstream os;
        os << "c0 tail estimate " << out.tail << " exceeds " << tail_tol << " of the total " << out.value;
        fail(ErrorKind::divergent_tail, os.str());
    }
    return out;
}

std::vector<double> quantile_eigenvalues(const SpectralMeasure& m, std::size_t n) {
    if (n < 1) fail(ErrorKind::invalid_argument, "quantile_eigenvalues: n must be >= 1");
    std::vector<double> out;
    out.reserve(n);
    if (const auto* a = std::get_if<measure::Atoms>(&m.variant())) {
        // Largest-remainder allocation of n copies among the atoms.
        const std::size_t k = a->atoms.size();
        std::vector<std::size_t> copies(k);
        std::vector<double> remainder(k);
        std::size_t assigned = 0;
        for (std::size_t i = 0; i < k; ++i) {
            const double share = a->atoms[i].weight * static_cast<double>(n);
            copies[i] = static_cast<std::size_t>(std::floor(share));
            remainder[i] = share - std::floor(share);
            assigned += copies[i];
        }
        std::vector<std::size_t> order(k);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t x, std::size_t y) { return remainder[x] > remainder[y]; });
        for (std::size_t r = 0; assigned < n; ++r, ++assigned) ++copies[order[r % k]];
        for (std::size_t i = 0; i < k; ++i) out.insert(out.end(), copies[i], a->atoms[i].location);
        return out;
    }
    const auto [lo, hi] = m.support();
    for (std::size_t j = 0; j < n; ++j) {
        const double target = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
        double a = lo, b = hi;
        for (int iter = 0; iter < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a) + std::abs(b)); ++iter) {
            const double mid = 0.5 * (a + b);
            if (m.cdf(mid) < target) a = mid;
            else b = mid;
        }
        out.push_back(0.5 * (a + b));
    }
    return out;
}

}  // namespace rmrelax
