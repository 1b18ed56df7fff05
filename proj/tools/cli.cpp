#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "pfsurf/curvature.hpp"
#include "pfsurf/io.hpp"
#include "pfsurf/kernels.hpp"
#include "pfsurf/mesh.hpp"
#include "pfsurf/sweep.hpp"
#include "pfsurf/synth.hpp"
#include "pfsurf/timing.hpp"

namespace pfsurf {
namespace {

std::pair<int, int> parse_gaps(const std::string& s) {
    const auto colon = s.find(':');
    try {
        if (colon == std::string::npos) throw std::invalid_argument(s);
        std::size_t a_used = 0, b_used = 0;
        const auto a_str = s.substr(0, colon), b_str = s.substr(colon + 1);
        const int a = std::stoi(a_str, &a_used), b = std::stoi(b_str, &b_used);
        if (a_used != a_str.size() || b_used != b_str.size()) throw std::invalid_argument(s);
        return {a, b};
    } catch (const std::exception&) {
        throw ValidationError("--gaps: expected a:b, got '" + s + "'");
    }
}

double parse_threshold(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || std::isnan(v)) {
        throw ValidationError("--criterion-sigma-gc: expected a number or inf, got '" + s + "'");
    }
    return v;
}

BinaryVolume example_volume(const std::string& name, int n) {
    if (name == "sphere") return example_sphere(n);
    if (name == "branching") return example_branching(n);
    throw ValidationError("--example: expected sphere or branching, got '" + name + "'");
}

SliceStack example_stack(const std::string& name, int n, std::uint64_t seed) {
    if (name == "sphere") return example_sphere_stack(n);
    if (name == "branching") return example_branching_stack(n, seed);
    throw ValidationError("--example: expected sphere or branching, got '" + name + "'");
}

ObstacleMode parse_mode(const std::string& s) {
    if (s == "indicator") return ObstacleMode::indicator;
    if (s == "exact") return ObstacleMode::exact;
    throw ValidationError("--mode: expected indicator or exact, got '" + s + "'");
}

VertexArea parse_area(const std::string& s) {
    if (s == "mixed") return VertexArea::mixed_voronoi;
    if (s == "barycentric") return VertexArea::barycentric;
    throw ValidationError("--area: expected mixed or barycentric, got '" + s + "'");
}

std::string fmt(double v, const char* spec = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

struct SynthArgs {
    std::string example = "sphere";
    int n = 32;
    std::string out;
    int slices = 0;
    std::string gaps;
    std::uint64_t seed = 7;
    std::string stack;
};

void cmd_synth(const SynthArgs& a, std::ostream& out) {
    const auto vol = example_volume(a.example, a.n);
    write_rvol(a.out, vol);
    out << "wrote " << a.out << " (" << vol.count() << " voxels set)\n";
    if (a.stack.empty()) {
        if (a.slices > 0 || !a.gaps.empty()) {
            throw ValidationError("--slices and --gaps need --stack to write the slices");
        }
        return;
    }
    SliceStack stack;
    if (a.slices > 0) {
        if (a.gaps.empty()) throw ValidationError("--slices needs --gaps a:b");
        const auto [lo, hi] = parse_gaps(a.gaps);
        stack = subsample_slices(vol, uneven_planes(vol, {a.slices, lo, hi, a.seed}));
    } else {
        if (!a.gaps.empty()) throw ValidationError("--gaps needs --slices");
        stack = example_stack(a.example, a.n, a.seed);
    }
    write_slice_stack(a.stack, stack);
    out << "wrote " << stack.slices.size() << " slices to " << a.stack << " (planes";
    for (const auto& s : stack.slices) out << ' ' << s.plane;
    out << ")\n";
}

struct ReconstructArgs {
    std::string stack;
    std::string replay;
    std::string formulation = "elastica";
    std::string method = "pgdm";
    std::string scheme = "gradient";
    std::string eps_rule = "1.5/N";
    std::string tau_rule = "eps^4";
    double rho = 1.0;
    double alpha = 0.5;
    int erosion = 0;
    std::string mode = "indicator";
    int max_iters = 2000;
    double tol_rel = 1e-4;
    double tol_energy = 0.0;
    std::string out;
    std::string trace;
    std::string manifest;
};

void cmd_reconstruct(const ReconstructArgs& a, std::ostream& out) {
    ExperimentManifest m;
    if (!a.replay.empty()) {
        m = load_manifest(a.replay);
        if (!a.out.empty()) m.out_u = a.out;
        if (!a.trace.empty()) m.out_trace = a.trace;
    } else {
        if (a.stack.empty()) throw ValidationError("reconstruct needs --stack or --replay");
        if (a.out.empty()) throw ValidationError("reconstruct needs --out");
        const auto ingested = ingest_real_stack(a.stack);
        for (const auto& w : ingested.report.warnings) out << "warning: " << w << '\n';
        const auto& st = ingested.stack;
        m.example = "stack";
        m.stack_dir = a.stack;
        m.n = std::max({st.grid.nx, st.grid.ny, st.grid.nz});
        m.axis = st.axis;
        for (const auto& s : st.slices) m.planes.push_back(s.plane);
        m.formulation = parse_formulation(a.formulation);
        m.method = parse_method(a.method);
        m.scheme = parse_update_scheme(a.scheme);
        m.eps_rule = a.eps_rule;
        m.tau_rule = a.tau_rule;
        m.rho = a.rho;
        m.alpha = a.alpha;
        m.erosion = a.erosion;
        m.mode = parse_mode(a.mode);
        m.max_iters = a.max_iters;
        m.tol_rel = a.tol_rel;
        m.tol_energy = a.tol_energy;
        m.out_u = a.out;
        m.out_trace = a.trace;
    }
    if (!a.manifest.empty()) save_manifest(a.manifest, m);
    const auto r = run_manifest(m);
    out << "iterations " << r.iters_done << ", stopped by " << to_string(r.termination_reason)
        << ", eps " << fmt(r.config.eps) << ", tau " << fmt(r.config.tau) << '\n';
    if (!m.out_u.empty()) out << "wrote " << m.out_u << '\n';
    if (!m.out_trace.empty()) out << "wrote " << m.out_trace << '\n';
}

struct MeshArgs {
    std::string in;
    double level = 0.5;
    std::string out;
};

void cmd_mesh(const MeshArgs& a, std::ostream& out) {
    const auto u = read_rvol_field(a.in);
    const auto mesh = extract_isosurface(u, a.level);
    write_obj(a.out, mesh);
    out << "wrote " << a.out << " (" << mesh.vertices.size() << " vertices, "
        << mesh.triangles.size() << " triangles)\n";
}

struct MetricsArgs {
    std::string in;
    int bins = 50;
    std::string area = "mixed";
    std::string out;
    std::string hist;
    std::string csv;
};

void cmd_metrics(const MetricsArgs& a, std::ostream& out) {
    const auto mesh = read_obj(a.in);
    const auto r = curvature_report(mesh, a.bins, parse_area(a.area));
    write_summary_json(a.out, r);
    if (!a.hist.empty()) write_histogram_csv(a.hist, r);
    if (!a.csv.empty()) write_vertex_csv(a.csv, r);
    out << "sigma_gc " << fmt(r.sigma_gc) << ", sigma_mc " << fmt(r.sigma_mc) << ", "
        << r.n_included << " of " << r.n_vertices << " vertices used\n";
}

struct SweepArgs {
    std::string example = "sphere";
    int n = 32;
    std::string rho = "0.5:10:0.5";
    std::string epsn = "1.5:3:0.1";
    std::string tau_rule = "eps^3";
    std::string criterion = "10.5005";
    int max_iters = 400;
    int check_every = 20;
    bool stop_on_pass = false;
    std::string scheme = "gradient";
    std::uint64_t seed = 7;
    std::string out;
};

void cmd_sweep(const SweepArgs& a, std::ostream& out) {
    SweepSettings s;
    s.rho = parse_range(a.rho, "--rho");
    s.eps_n = parse_range(a.epsn, "--epsn");
    s.tau_rule = a.tau_rule;
    eval_tau_rule(s.tau_rule, 0.5);  // reject malformed rules before any work
    s.criterion = parse_threshold(a.criterion);
    s.max_iters = a.max_iters;
    s.check_every = a.check_every;
    s.stop_on_pass = a.stop_on_pass;
    s.scheme = parse_update_scheme(a.scheme);
    const auto stack = example_stack(a.example, a.n, a.seed);
    const auto cells = sweep_admm(stack, s, [&](const SweepCell& c, std::size_t done,
                                                std::size_t total) {
        out << '[' << done << '/' << total << "] rho " << fmt(c.rho) << " epsN " << fmt(c.eps_n)
            << (c.pass ? " pass" : " fail") << " sigma_gc_best " << fmt(c.sigma_gc_best);
        if (!c.note.empty()) out << " (" << c.note << ')';
        out << std::endl;
    });
    write_sweep_csv(a.out, cells, s.tau_rule);
    const auto passed = std::count_if(cells.begin(), cells.end(), [](const SweepCell& c) { return c.pass; });
    out << passed << " of " << cells.size() << " cells pass; wrote " << a.out << '\n';
}

struct BenchArgs {
    std::string example = "sphere";
    std::vector<int> n{16, 32, 64};
    int iters = 50;
    int warmup = 3;
    std::string formulation = "elastica";
    std::string method = "pgdm";
    std::string out;
};

void cmd_bench(const BenchArgs& a, std::ostream& out) {
    if (a.iters < 1) throw ValidationError("--iters must be >= 1");
    std::ofstream csv(a.out);
    if (!csv) throw ValidationError("cannot open '" + a.out + "' for writing");
    csv << "n,iters,threads,ms_per_iter\n";
    for (int n : a.n) {
        SolverConfig cfg;
        cfg.formulation = parse_formulation(a.formulation);
        cfg.method = parse_method(a.method);
        cfg.eps = 1.5 / n;
        cfg.tau = std::pow(cfg.eps, 4);
        const auto problem = problem_from_stack(example_stack(a.example, n, 7), cfg);
        const double ms = mean(step_times_ms(problem, cfg, a.iters, a.warmup));
        csv << n << ',' << a.iters << ',' << num_threads() << ',' << fmt(ms, "%.6f") << '\n';
        out << "n " << n << ": " << fmt(ms, "%.3f") << " ms per iteration\n";
    }
    out << "wrote " << a.out << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Surface reconstruction from parallel cross-sections"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads; 1 forces the serial reference kernels")
        ->check(CLI::NonNegativeNumber);

    SynthArgs sa;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic volume and optional slices");
    synth->add_option("--example", sa.example, "sphere or branching");
    synth->add_option("--n", sa.n, "Grid size")->check(CLI::PositiveNumber);
    synth->add_option("--out", sa.out, "Output volume (.rvol)")->required();
    synth->add_option("--slices", sa.slices, "Number of uneven slices")->check(CLI::PositiveNumber);
    synth->add_option("--gaps", sa.gaps, "Gap range a:b for uneven slices");
    synth->add_option("--seed", sa.seed, "Seed of the uneven gap rule");
    synth->add_option("--stack", sa.stack, "Directory for slice PGMs and manifest");

    ReconstructArgs ra;
    auto* rec = app.add_subcommand("reconstruct", "Minimise a phase-field energy under slice constraints");
    rec->add_option("--stack", ra.stack, "Slice directory with manifest.json");
    rec->add_option("--replay", ra.replay, "Experiment manifest to replay");
    rec->add_option("--formulation", ra.formulation, "perimeter, willmore or elastica");
    rec->add_option("--method", ra.method, "pgdm or admm");
    rec->add_option("--scheme", ra.scheme, "Elastica update signs: gradient or printed");
    rec->add_option("--eps-rule", ra.eps_rule, "c/N or a number");
    rec->add_option("--tau-rule", ra.tau_rule, "eps^p, c*eps^p or a number");
    rec->add_option("--rho", ra.rho, "ADMM penalty");
    rec->add_option("--alpha", ra.alpha, "Fattening exponent, h = eps^alpha");
    rec->add_option("--erosion", ra.erosion, "Interior erosion radius in pixels");
    rec->add_option("--mode", ra.mode, "indicator or exact obstacles");
    rec->add_option("--max-iters", ra.max_iters, "Iteration cap")->check(CLI::NonNegativeNumber);
    rec->add_option("--tol-rel", ra.tol_rel, "Relative change tolerance (0 disables)");
    rec->add_option("--tol-energy", ra.tol_energy, "Energy change tolerance (0 disables)");
    rec->add_option("--out", ra.out, "Output field (.rvol)");
    rec->add_option("--trace", ra.trace, "Trace CSV");
    rec->add_option("--manifest", ra.manifest, "Write the experiment manifest here");

    MeshArgs ma;
    auto* mesh = app.add_subcommand("mesh", "Extract the isosurface of a field");
    mesh->add_option("--in", ma.in, "Input field (.rvol)")->required();
    mesh->add_option("--level", ma.level, "Iso level");
    mesh->add_option("--out", ma.out, "Output mesh (.obj)")->required();

    MetricsArgs ka;
    auto* metrics = app.add_subcommand("metrics", "Discrete curvature report of a mesh");
    metrics->add_option("--in", ka.in, "Input mesh (.obj)")->required();
    metrics->add_option("--bins", ka.bins, "Histogram bins")->check(CLI::PositiveNumber);
    metrics->add_option("--area", ka.area, "Vertex area: mixed or barycentric");
    metrics->add_option("--out", ka.out, "Summary JSON")->required();
    metrics->add_option("--hist", ka.hist, "Histogram CSV");
    metrics->add_option("--csv", ka.csv, "Per-vertex CSV");

    SweepArgs wa;
    auto* sweep = app.add_subcommand("sweep", "ADMM sensitivity map over rho and eps*N");
    sweep->add_option("--example", wa.example, "sphere or branching");
    sweep->add_option("--n", wa.n, "Grid size")->check(CLI::PositiveNumber);
    sweep->add_option("--rho", wa.rho, "lo:hi:step or a value");
    sweep->add_option("--epsn", wa.epsn, "lo:hi:step or a value");
    sweep->add_option("--tau-rule", wa.tau_rule, "eps^p, c*eps^p or a number");
    sweep->add_option("--criterion-sigma-gc", wa.criterion, "Pass threshold (inf allowed)");
    sweep->add_option("--max-iters", wa.max_iters, "Iterations per cell")->check(CLI::PositiveNumber);
    sweep->add_option("--check-every", wa.check_every, "Mesh every k iterations")
        ->check(CLI::PositiveNumber);
    sweep->add_flag("--stop-on-pass", wa.stop_on_pass, "End a cell at its first pass");
    sweep->add_option("--scheme", wa.scheme, "gradient or printed");
    sweep->add_option("--seed", wa.seed, "Seed for the branching slices");
    sweep->add_option("--out", wa.out, "Map CSV")->required();

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "Per-iteration wall time against N");
    bench->add_option("--example", ba.example, "sphere or branching");
    bench->add_option("--n", ba.n, "Grid sizes")->delimiter(',');
    bench->add_option("--iters", ba.iters, "Timed iterations per size");
    bench->add_option("--warmup", ba.warmup, "Untimed iterations before timing")
        ->check(CLI::NonNegativeNumber);
    bench->add_option("--formulation", ba.formulation, "perimeter, willmore or elastica");
    bench->add_option("--method", ba.method, "pgdm or admm");
    bench->add_option("--out", ba.out, "Output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        set_num_threads(threads > 0 ? threads
                                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
        if (synth->parsed()) cmd_synth(sa, out);
        if (rec->parsed()) cmd_reconstruct(ra, out);
        if (mesh->parsed()) cmd_mesh(ma, out);
        if (metrics->parsed()) cmd_metrics(ka, out);
        if (sweep->parsed()) cmd_sweep(wa, out);
        if (bench->parsed()) cmd_bench(ba, out);
    } catch (const DivergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitOk;
}

}  // namespace pfsurf
