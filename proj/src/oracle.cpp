#include "kvn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kvn/billiard.hpp"
#include "kvn/error.hpp"

namespace kvn {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Cell [lo, hi] owned by node i of an axis.
std::pair<double, double> cell(const Axis& a, std::size_t i) {
    const double h = a.spacing();
    double lo = a.at(i) - 0.5 * h;
    double hi = a.at(i) + 0.5 * h;
    if (a.closed) {
        lo = std::max(lo, a.min);
        hi = std::min(hi, a.max);
    }
    return {lo, hi};
}

// Node index owning x, or -1 when x is outside every cell.
long owner(const Axis& a, double x) {
    const double h = a.spacing();
    const double r = std::floor((x - a.min) / h + 0.5);
    if (a.closed && (x < a.min || x > a.max)) return -1;
    if (r < 0.0 || r >= static_cast<double>(a.points())) return -1;
    return static_cast<long>(r);
}

void leapfrog(double& q, double& p, double t, double dt, const PotentialSpec& v, double m) {
    if (t == 0.0) return;
    const double dir = t > 0.0 ? 1.0 : -1.0;
    const double span = std::abs(t);
    const auto n = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
    const double h = dir * span / static_cast<double>(n);
    p -= 0.5 * h * v.v_prime(q);
    for (std::size_t k = 0; k < n; ++k) {
        q += h * p / m;
        p -= (k + 1 == n ? 0.5 : 1.0) * h * v.v_prime(q);
    }
}

}  // namespace

double uniform01(std::uint64_t seed, std::uint64_t index, std::uint64_t stream) {
    const std::uint64_t key = splitmix(splitmix(seed) ^ (index * 0xD1B54A32D192ED03ULL + stream));
    return static_cast<double>(key >> 11) * 0x1.0p-53;
}

ClassicalEnsemble sample_ensemble(const RealField& density, std::size_t n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw Error("sample_ensemble: n_samples must be >= 1");
    const GridSpec& g = density.grid;
    std::vector<double> cdf(g.size());
    double total = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        for (std::size_t j = 0; j < g.cols(); ++j) {
            const double f = density(i, j);
            if (!(f >= 0.0) || !std::isfinite(f)) throw Error("sample_ensemble: density must be finite and >= 0");
            total += f * g.weight(i);
            cdf[g.index(i, j)] = total;
        }
    }
    if (!(total > 0.0)) throw Error("sample_ensemble: density is zero everywhere");

    ClassicalEnsemble e;
    e.seed = seed;
    e.samples.resize(n_samples);
    const double w = 1.0 / static_cast<double>(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s) {
        const double u = uniform01(seed, s, 0) * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const auto k = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf.begin(), cdf.size() - 1));
        const auto [qlo, qhi] = cell(g.q(), k / g.cols());
        const auto [plo, phi] = cell(g.dual(), k % g.cols());
        e.samples[s] = {qlo + (qhi - qlo) * uniform01(seed, s, 1), plo + (phi - plo) * uniform01(seed, s, 2), w};
    }
    return e;
}

ClassicalEnsemble integrate_hamilton(const ClassicalEnsemble& in, double t, const ScenarioKind& kind,
                                     std::optional<double> dt, const UnitSystem& u) {
    u.validate();
    ClassicalEnsemble out = in;
    out.time = in.time + t;
    const double m = u.mass;
    std::visit(
        [&](const auto& sc) {
            using T = std::decay_t<decltype(sc)>;
            if constexpr (std::is_same_v<T, scenario::Free>) {
                for (Sample& s : out.samples) s.q += s.p * t / m;
            } else if constexpr (std::is_same_v<T, scenario::Box>) {
                if (!(sc.length > 0.0)) throw Error("integrate_hamilton: box length must be positive");
                for (Sample& s : out.samples) {
                    if (s.q < 0.0 || s.q > sc.length)
                        throw Error("integrate_hamilton: box sample outside [0, L]");
                    const PhasePoint r = billiard_flow({s.q, s.p}, t, sc.length, m);
                    s.q = r.q;
                    s.p = r.p;
                }
            } else if constexpr (std::is_same_v<T, scenario::Gravity>) {
                for (Sample& s : out.samples) {
                    s.q += s.p * t / m - 0.5 * sc.g * t * t;
                    s.p -= m * sc.g * t;
                }
            } else {
                if (!dt || !(*dt > 0.0)) throw Error("integrate_hamilton: potential scenario needs dt > 0");
                for (Sample& s : out.samples) leapfrog(s.q, s.p, t, *dt, sc.potential, m);
            }
        },
        kind);
    return out;
}

namespace {

// Separable Gaussian smoothing along one axis with renormalized truncated weights.
void smooth_axis(std::vector<double>& v, const GridSpec& g, bool along_q, double width) {
    if (width <= 0.0) return;
    const double h = along_q ? g.dq() : g.d_dual();
    const long reach = static_cast<long>(std::ceil(4.0 * width / h));
    std::vector<double> k(2 * reach + 1);
    for (long r = -reach; r <= reach; ++r) {
        const double x = r * h / width;
        k[r + reach] = std::exp(-0.5 * x * x);
    }
    const long rows = static_cast<long>(g.rows());
    const long cols = static_cast<long>(g.cols());
    std::vector<double> out(v.size(), 0.0);
    for (long i = 0; i < rows; ++i) {
        for (long j = 0; j < cols; ++j) {
            double acc = 0.0, wsum = 0.0;
            for (long r = -reach; r <= reach; ++r) {
                const long ii = along_q ? i + r : i;
                const long jj = along_q ? j : j + r;
                if (ii < 0 || ii >= rows || jj < 0 || jj >= cols) continue;
                acc += k[r + reach] * v[ii * cols + jj];
                wsum += k[r + reach];
            }
            out[i * cols + j] = acc / wsum;
        }
    }
    v.swap(out);
}

}  // namespace

DensityEstimate density_estimate(const ClassicalEnsemble& e, const GridSpec& g, double bq, double bp) {
    DensityEstimate d{{g, std::vector<double>(g.size(), 0.0)}, 0.0, bq, bp};
    double outside = 0.0;
    for (const Sample& s : e.samples) {
        const long i = owner(g.q(), s.q);
        const long j = owner(g.dual(), s.p);
        if (i < 0 || j < 0) {
            outside += s.weight;
            continue;
        }
        d.field.values[g.index(i, j)] += s.weight;
    }
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) d.field.values[g.index(i, j)] /= g.weight(i);
    smooth_axis(d.field.values, g, true, bq);
    smooth_axis(d.field.values, g, false, bp);
    d.out_of_range_fraction = outside;
    return d;
}

DensityComparison compare_densities(const RealField& a, const RealField& b) {
    if (!(a.grid == b.grid) || a.values.size() != b.values.size())
        throw Error("compare_densities: grid mismatch");
    const GridSpec& g = a.grid;
    DensityComparison c;
    double diff_max = 0.0, b_max = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < g.cols(); ++j) {
            const double d = std::abs(a(i, j) - b(i, j));
            row += d;
            diff_max = std::max(diff_max, d);
            b_max = std::max(b_max, std::abs(b(i, j)));
        }
        c.l1 += g.weight(i) * row;
    }
    if (b_max > 0.0) {
        c.linf = diff_max / b_max;
    } else {
        c.linf = diff_max;
        c.linf_absolute = true;
    }
    return c;
}

double monte_carlo_budget(const RealField& f, std::size_t n) {
    if (n < 1) throw Error("monte_carlo_budget: n must be >= 1");
    const GridSpec& g = f.grid;
    const double nn = static_cast<double>(n);
    const long rows = static_cast<long>(g.rows()), cols = static_cast<long>(g.cols());
    auto at = [&](long i, long j) {
        return (i < 0 || i >= rows || j < 0 || j >= cols) ? 0.0 : f.values[i * cols + j];
    };
    double sd_sum = 0.0, var_sum = 0.0, bias = 0.0;
    for (long i = 0; i < rows; ++i) {
        const double area = g.weight(static_cast<std::size_t>(i));
        for (long j = 0; j < cols; ++j) {
            const double pc = std::clamp(at(i, j) * area, 0.0, 1.0);
            const double var = pc * (1.0 - pc) / nn;
            sd_sum += std::sqrt(var);
            var_sum += var;
            const double fqq = (at(i + 1, j) - 2.0 * at(i, j) + at(i - 1, j));  // h^2 f_qq
            const double fpp = (at(i, j + 1) - 2.0 * at(i, j) + at(i, j - 1));  // h^2 f_pp
            bias += (std::abs(fqq) + std::abs(fpp)) / 24.0 * area;
        }
    }
    return sd_sum + 5.0 * std::sqrt(var_sum) + bias;
}

double PhaseSpaceGaussian::operator()(double q, double p) const {
    const double det = sigma_q * sigma_q * sigma_p * sigma_p - correlation * correlation;
    if (!(det > 0.0)) throw Error("phase-space Gaussian: covariance not positive definite");
    const double x = q - q0, y = p - p0;
    const double quad = (sigma_p * sigma_p * x * x - 2.0 * correlation * x * y + sigma_q * sigma_q * y * y) / det;
    return std::exp(-0.5 * quad) / (2.0 * std::numbers::pi * std::sqrt(det));
}

RealField liouville_pullback(const GridSpec& g, const PhaseSpaceGaussian& f0, const PotentialSpec& v,
                             double t, double dt) {
    if (!(dt > 0.0)) throw Error("liouville_pullback: dt must be positive");
    RealField out{g, std::vector<double>(g.size())};
    const double m = g.units().mass;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        for (std::size_t j = 0; j < g.cols(); ++j) {
            double q = g.q().at(i), p = g.dual().at(j);
            leapfrog(q, p, -t, dt, v, m);
            out.values[g.index(i, j)] = f0(q, p);
        }
    }
    return out;
}

}  // namespace kvn
