#include "kvn/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "kvn/csv.hpp"
#include "kvn/evolution.hpp"
#include "kvn/observables.hpp"
#include "kvn/oracle.hpp"
#include "kvn/transform.hpp"

namespace kvn {

namespace {

namespace fs = std::filesystem;

struct Manifest {
    std::vector<std::pair<std::string, std::string>> entries;
    void add(const std::string& file, const std::string& columns) { entries.emplace_back(file, columns); }
};

UnitSystem units_of(const ScenarioConfig& c) { return {c.hbar, c.mass}; }

void record_observables(RunReport& rep, const KvnState& s, const PotentialSpec& v) {
    const auto q = expectation_position(s);
    const auto p = expectation_momentum(s);
    const auto h = expectation_hamiltonian(s, v);
    rep.observables.push_back({s.time(), q.norm, q.value, p.value, h.value});
    rep.max_norm_drift = std::max(rep.max_norm_drift, std::abs(q.norm - 1.0));
}

void write_density(const fs::path& dir, std::size_t k, const KvnState& s, Manifest& m, RunReport& rep) {
    const std::string name = "density_t" + std::to_string(k) + ".csv";
    CsvWriter w((dir / name).string(), {"q", "p", "density"});
    const GridSpec& g = s.grid();
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) w.row({g.q().at(i), g.dual().at(j), std::norm(s(i, j))});
    m.add(name, "q, p, |psi(q,p)|^2 at t = " + format_double(s.time()) + " (long format)");
    rep.files.push_back(name);
}

// Transport scenarios: free, box, gravity.
void run_transport(const ScenarioConfig& c, RunReport& rep, const fs::path& dir, Manifest& man) {
    const UnitSystem u = units_of(c);
    const bool box = c.scenario == ScenarioName::Box;
    const bool grav = c.scenario == ScenarioName::Gravity;
    const GridSpec grid = box ? GridSpec::box(c.length, c.n_q, 0.5 * (c.dual_max - c.dual_min), c.n_dual, u)
                              : GridSpec::periodic(c.q_min, c.q_max, c.n_q, c.dual_min, c.dual_max, c.n_dual, u);
    if (box && std::abs(c.dual_min + c.dual_max) > 1e-12 * (c.dual_max - c.dual_min))
        throw ConfigError("config: box momentum grid must be symmetric (dual_min = -dual_max)");
    const KvnState psi0 =
        make_gaussian_state(grid, Representation::PositionMomentum, {c.q0, c.p0, c.sigma_q, c.sigma_p});
    const PotentialSpec v = grav ? PotentialSpec::linear(c.mass * c.g) : PotentialSpec::zero();
    ImageSumPolicy policy{c.n_images, c.tail_tol};
    const BoxBackend backend = c.backend == "image-kernel" ? BoxBackend::ImageKernel : BoxBackend::Characteristics;

    auto evolve = [&](double t) {
        if (box) return evolve_box(psi0, t, c.length, backend, policy);
        if (grav) return evolve_gravity(psi0, t, c.g);
        return evolve_free_spectral(psi0, t);
    };
    ScenarioKind kind = scenario::Free{};
    if (box) kind = scenario::Box{c.length};
    if (grav) kind = scenario::Gravity{c.g};

    const ClassicalEnsemble ens0 = sample_ensemble(density(psi0), c.n_samples, c.seed);

    for (std::size_t k = 0; k < c.times.size(); ++k) {
        const double t = c.times[k];
        const KvnState s = evolve(t);
        record_observables(rep, s, v);
        write_density(dir, k, s, man, rep);

        if (box) {
            const auto walls = qparity_check(to_dual(s), c.length);
            for (const WallReport& w : walls) {
                rep.walls.push_back({t, w});
                rep.max_wall_current = std::max(rep.max_wall_current, w.max_wall_current);
                rep.max_parity_asymmetry = std::max(rep.max_parity_asymmetry, w.max_parity_asymmetry);
            }
        }
        if (grav && t > 0.0) {
            const KvnState via_dual = to_momentum(evolve_gravity(to_dual(psi0), t, c.g));
            double diff = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < s.amplitudes().size(); ++i) {
                diff = std::max(diff, std::abs(s.amplitudes()[i] - via_dual.amplitudes()[i]));
                scale = std::max(scale, std::abs(s.amplitudes()[i]));
            }
            rep.gravity_route_mismatch = std::max(rep.gravity_route_mismatch.value_or(0.0), diff / scale);
        }

        const ClassicalEnsemble ens = integrate_hamilton(ens0, t, kind, std::nullopt, u);
        const DensityEstimate est = density_estimate(ens, grid);
        const RealField ref = density(s);
        const DensityComparison cmp = compare_densities(est.field, ref);
        rep.oracle.push_back({t, cmp.l1, cmp.linf, monte_carlo_budget(ref, c.n_samples), est.out_of_range_fraction});
    }

    CsvWriter obs((dir / "observables.csv").string(), {"time", "norm", "mean_q", "mean_p", "mean_h"});
    for (const auto& r : rep.observables) obs.row({r.time, r.norm, r.mean_q, r.mean_p, r.mean_h});
    man.add("observables.csv", "time, norm, <q>, <p>, <p^2/2m + V>");
    rep.files.push_back("observables.csv");

    CsvWriter orc((dir / "oracle.csv").string(), {"time", "l1", "linf", "mc_budget", "out_of_range"});
    for (const auto& r : rep.oracle) orc.row({r.time, r.l1, r.linf, r.budget, r.out_of_range});
    man.add("oracle.csv", "time, L1 and relative Linf distance of the trajectory histogram to |psi|^2, "
                          "Monte Carlo L1 budget, fraction of samples outside the grid");
    rep.files.push_back("oracle.csv");

    if (box) {
        CsvWriter wc((dir / "walls.csv").string(),
                     {"time", "wall", "max_parity_asymmetry", "max_wall_current", "net_wall_flux"});
        for (const auto& w : rep.walls)
            wc.row({format_double(w.time), w.report.wall == Wall::Left ? "left" : "right",
                    format_double(w.report.max_parity_asymmetry), format_double(w.report.max_wall_current),
                    format_double(w.report.net_wall_flux)});
        man.add("walls.csv", "time, wall, relative Q-parity asymmetry, relative max |J_q|, relative net flux");
        rep.files.push_back("walls.csv");
    }

    for (const auto& r : rep.oracle)
        if (r.l1 > r.budget)
            rep.failures.push_back("oracle L1 " + format_double(r.l1) + " exceeds Monte Carlo budget " +
                                   format_double(r.budget) + " at t = " + format_double(r.time));
    if (rep.max_norm_drift > (box && backend == BoxBackend::ImageKernel ? 1e-8 : 1e-10))
        rep.failures.push_back("norm drift " + format_double(rep.max_norm_drift));
    if (box && rep.max_wall_current > 1e-8)
        rep.failures.push_back("wall current " + format_double(rep.max_wall_current) + " exceeds 1e-8");
    if (box && rep.max_parity_asymmetry > 1e-8)
        rep.failures.push_back("wall parity asymmetry " + format_double(rep.max_parity_asymmetry) + " exceeds 1e-8");
    if (rep.gravity_route_mismatch && *rep.gravity_route_mismatch > 1e-8)
        rep.failures.push_back("gravity (q,p) and (q,Q) routes differ by " +
                               format_double(*rep.gravity_route_mismatch));
}

void run_spectrum(const ScenarioConfig& c, RunReport& rep, const fs::path& dir, Manifest& man) {
    const UnitSystem u = units_of(c);
    std::vector<double> kappas(c.n_kappa);
    for (std::size_t i = 0; i < c.n_kappa; ++i)
        kappas[i] = c.kappa_min + (c.kappa_max - c.kappa_min) * static_cast<double>(i) /
                                      static_cast<double>(c.n_kappa - 1);
    for (int n = 1; n <= c.n_max; ++n)
        for (const SweepRow& r : energy_sweep(n, kappas, c.length, u)) rep.bands.push_back({n, r.kappa, r.energy});
    rep.quantum = quantum_box_levels(c.n_max, c.length, u);

    CsvWriter b((dir / "spectrum_bands.csv").string(), {"n", "kappa", "energy"});
    for (const auto& r : rep.bands) b.row({static_cast<double>(r.n), r.kappa, r.energy});
    man.add("spectrum_bands.csv", "n, kappa, band energy (hbar^2/m)(n pi/L) kappa");
    CsvWriter q((dir / "spectrum_quantum.csv").string(), {"n", "energy"});
    for (const auto& l : rep.quantum) q.row({static_cast<double>(l.n), l.energy});
    man.add("spectrum_quantum.csv", "n, quantum box level n^2 pi^2 hbar^2 / (2 m L^2)");
    rep.files.insert(rep.files.end(), {"spectrum_bands.csv", "spectrum_quantum.csv"});
}

void run_two_slit(const ScenarioConfig& c, RunReport& rep, const fs::path& dir, Manifest& man) {
    const auto r = two_slit_compare(c.slit_separation, c.slit_width, c.momentum_spread, c.t_final, {}, units_of(c));
    CsvWriter w((dir / "two_slit.csv").string(), {"time", "kvn_cross_term", "quantum_visibility", "has_fringes"});
    for (const auto& p : r.probes)
        w.row({p.time, p.kvn_cross_term, p.quantum_visibility, p.quantum_has_fringes ? 1.0 : 0.0});
    man.add("two_slit.csv", "time, max_q |rho_12 - rho_1 - rho_2| (KvN), quantum fringe visibility, fringe flag");
    rep.files.push_back("two_slit.csv");
    if (r.kvn_cross_term_max > 1e-12)
        rep.failures.push_back("KvN cross term " + format_double(r.kvn_cross_term_max) + " exceeds 1e-12");
    if (r.quantum_fringe_visibility < 0.5)
        rep.failures.push_back("quantum fringe visibility " + format_double(r.quantum_fringe_visibility) +
                               " below 0.5");
    rep.two_slit = r;
}

void run_kappa_dial(const ScenarioConfig& c, RunReport& rep, const fs::path& dir, Manifest& man) {
    const UnitSystem u = units_of(c);
    const PotentialSpec v = c.potential == "harmonic" ? PotentialSpec::harmonic(c.mass, 1.0) : PotentialSpec::quartic(0.25);
    ContractionSetup setup;
    setup.dt = c.dt;
    setup.protocol = c.protocol == "fixed-moments" ? ContractionProtocol::FixedMoments : ContractionProtocol::CoherentScaling;
    const PhaseSpaceGaussian init{c.q0, c.p0, c.sigma_q, c.sigma_p, 0.0};
    const auto r = contraction_experiment(v, c.kappas, c.t_final, init, setup, u);
    CsvWriter w((dir / "contraction.csv").string(), {"kappa", "sigma_q", "sigma_p", "l1", "l1_refined", "two_point"});
    for (const auto& row : r.rows) w.row({row.kappa, row.sigma_q, row.sigma_p, row.l1, row.l1_refined, row.two_point});
    man.add("contraction.csv", "kappa, initial widths, L1(Wigner, Liouville), L1 on the refined grid, "
                               "two-point residual");
    rep.files.push_back("contraction.csv");
    if (!r.passed) rep.failures.push_back("contraction: " + r.message);
    for (const auto& row : r.rows)
        if (row.two_point > 1e-5)
            rep.failures.push_back("two-point residual " + format_double(row.two_point) + " at kappa " +
                                   format_double(row.kappa));
    rep.contraction = r;
}

std::string timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

void write_report(const fs::path& dir, const RunReport& r) {
    std::ofstream out(dir / "report.txt", std::ios::binary);
    if (!out) throw Error("cannot write report.txt");
    out << r.tool_version << "\n";
    out << "# timestamp: " << timestamp() << "  (volatile, excluded from golden comparison)\n";
    out << "# wall_clock_seconds: " << std::fixed << std::setprecision(3) << r.wall_clock_seconds
        << "  (volatile, excluded from golden comparison)\n";
    out.unsetf(std::ios::floatfield);
    out << "\n[config]\n";
    for (const auto& [k, v] : r.config_echo) out << k << " = " << v << "\n";
    for (const auto& o : r.overrides) out << "# override: " << o << "\n";

    if (!r.observables.empty()) {
        out << "\n[observables]\n";
        for (const auto& o : r.observables)
            out << "t = " << format_double(o.time) << ": norm = " << format_double(o.norm)
                << ", <q> = " << format_double(o.mean_q) << ", <p> = " << format_double(o.mean_p)
                << ", <H> = " << format_double(o.mean_h) << "\n";
        out << "max_norm_drift = " << format_double(r.max_norm_drift) << "\n";
    }
    if (!r.walls.empty()) {
        out << "\n[walls]\n";
        for (const auto& w : r.walls)
            out << "t = " << format_double(w.time) << " " << (w.report.wall == Wall::Left ? "left" : "right")
                << ": parity_asymmetry = " << format_double(w.report.max_parity_asymmetry)
                << ", wall_current = " << format_double(w.report.max_wall_current)
                << ", net_flux = " << format_double(w.report.net_wall_flux) << "\n";
        out << "max_wall_current = " << format_double(r.max_wall_current) << "\n";
        out << "max_parity_asymmetry = " << format_double(r.max_parity_asymmetry) << "\n";
    }
    if (r.gravity_route_mismatch) out << "\ngravity_route_mismatch = " << format_double(*r.gravity_route_mismatch) << "\n";
    if (!r.oracle.empty()) {
        out << "\n[oracle]\n";
        for (const auto& o : r.oracle)
            out << "t = " << format_double(o.time) << ": l1 = " << format_double(o.l1)
                << ", budget = " << format_double(o.budget) << ", linf = " << format_double(o.linf)
                << ", out_of_range = " << format_double(o.out_of_range) << "\n";
    }
    if (!r.bands.empty()) {
        out << "\n[spectrum]\nband rows = " << r.bands.size() << ", quantum rows = " << r.quantum.size() << "\n";
        for (const auto& q : r.quantum) out << "E_" << q.n << " = " << format_double(q.energy) << "\n";
    }
    if (r.two_slit) {
        out << "\n[two-slit]\nkvn_cross_term_max = " << format_double(r.two_slit->kvn_cross_term_max)
            << "\nquantum_fringe_visibility = " << format_double(r.two_slit->quantum_fringe_visibility) << "\n";
    }
    if (r.contraction) {
        out << "\n[contraction]\n";
        for (const auto& row : r.contraction->rows)
            out << "kappa = " << format_double(row.kappa) << ": l1 = " << format_double(row.l1)
                << ", l1_refined = " << format_double(row.l1_refined)
                << ", two_point = " << format_double(row.two_point) << "\n";
        out << "monotone = " << (r.contraction->monotone ? "yes" : "no")
            << ", converged = " << (r.contraction->converged ? "yes" : "no") << "\n";
    }
    out << "\n[checks]\n";
    if (r.failures.empty()) out << "all physics checks passed\n";
    for (const auto& f : r.failures) out << "FAILED: " << f << "\n";
}

}  // namespace

RunReport run_scenario(const ScenarioConfig& c) {
    const auto start = std::chrono::steady_clock::now();
    const fs::path dir(c.output_dir);
    fs::create_directories(dir);
    RunReport rep;
    rep.config_echo = c.echo();
    rep.overrides = c.overrides;
    Manifest man;
    switch (c.scenario) {
        case ScenarioName::Free:
        case ScenarioName::Box:
        case ScenarioName::Gravity: run_transport(c, rep, dir, man); break;
        case ScenarioName::Spectrum: run_spectrum(c, rep, dir, man); break;
        case ScenarioName::TwoSlit: run_two_slit(c, rep, dir, man); break;
        case ScenarioName::KappaDial: run_kappa_dial(c, rep, dir, man); break;
    }
    rep.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_report(dir, rep);
    man.add("report.txt", "human-readable summary; lines starting with '# timestamp' and "
                          "'# wall_clock_seconds' are volatile");
    std::ofstream mf(dir / "manifest.txt", std::ios::binary);
    mf << rep.tool_version << " output files (comma-separated, one header row)\n";
    for (const auto& [file, columns] : man.entries) mf << file << ": " << columns << "\n";
    if (!mf) throw Error("cannot write manifest.txt");
    return rep;
}

}  // namespace kvn
