#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pfsurf/io.hpp"
#include "pfsurf/synth.hpp"
#include "support.hpp"

using namespace pfsurf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto d = fs::temp_directory_path() / "pfsurf_test_io" / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

void write_bytes(const fs::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary);
    out << bytes;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("RVOL float round trip") {
    const auto d = scratch("f32");
    const GridSpec g(5, 6, 7);
    ScalarField3D u(g);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = static_cast<double>(i % 17) / 8.0 - 1.0;
    write_rvol(d / "u.rvol", u);
    CHECK(fs::file_size(d / "u.rvol") == 4 * g.size());
    const auto h = read_rvol_header(d / "u.rvol");
    CHECK(h.grid == g);
    CHECK(h.dtype == RvolType::f32);
    const auto back = read_rvol_field(d / "u.rvol");
    CHECK(back.spec() == g);
    CHECK(back.data() == u.data());
    // Doubles are narrowed to float.
    u[0] = 0.1;
    write_rvol(d / "v.rvol", u);
    CHECK(read_rvol_field(d / "v.rvol")[0] == static_cast<double>(0.1f));
}

TEST_CASE("RVOL mask round trip and validation") {
    const auto d = scratch("u8");
    const auto vol = gen_sphere(16, 0.3, {0.5, 0.5, 0.5});
    write_rvol(d / "m.rvol", vol);
    CHECK(fs::file_size(d / "m.rvol") == vol.size());
    CHECK(read_rvol_mask(d / "m.rvol") == vol);
    const auto as_field = read_rvol_field(d / "m.rvol");
    for (std::size_t i = 0; i < vol.size(); ++i) CHECK(as_field[i] == (vol[i] ? 1.0 : 0.0));

    auto bytes = slurp(d / "m.rvol");
    bytes[3] = 2;
    write_bytes(d / "m.rvol", bytes);
    CHECK(error_of([&] { read_rvol_mask(d / "m.rvol"); }).find("byte 3") != std::string::npos);

    write_rvol(d / "f.rvol", ScalarField3D(GridSpec::cube(4)));
    CHECK_THROWS_AS(read_rvol_mask(d / "f.rvol"), ValidationError);
}

TEST_CASE("RVOL header errors") {
    const auto d = scratch("hdr");
    write_rvol(d / "a.rvol", ScalarField3D(GridSpec::cube(4)));
    CHECK(rvol_sidecar(d / "a.rvol") == fs::path((d / "a.rvol").string() + ".json"));

    fs::remove(rvol_sidecar(d / "a.rvol"));
    CHECK_THROWS_AS(read_rvol_header(d / "a.rvol"), ValidationError);

    auto sidecar = [&](const std::string& json) { write_bytes(rvol_sidecar(d / "a.rvol"), json); };
    sidecar(R"({"nx":4,"ny":4,"nz":4,"dtype":"f64","order":"x-fastest"})");
    CHECK(error_of([&] { read_rvol_header(d / "a.rvol"); }).find("dtype") != std::string::npos);
    sidecar(R"({"nx":4,"ny":4,"nz":4,"dtype":"f32","order":"z-fastest"})");
    CHECK(error_of([&] { read_rvol_header(d / "a.rvol"); }).find("order") != std::string::npos);
    sidecar(R"({"nx":4,"ny":4,"dtype":"f32","order":"x-fastest"})");
    CHECK(error_of([&] { read_rvol_header(d / "a.rvol"); }).find("nz") != std::string::npos);
    sidecar(R"({"nx":4,"ny":4,"nz":2,"dtype":"f32","order":"x-fastest"})");
    CHECK_THROWS(read_rvol_header(d / "a.rvol"));
    sidecar("{not json");
    CHECK_THROWS_AS(read_rvol_header(d / "a.rvol"), ValidationError);
    // Payload size must match the header.
    sidecar(R"({"nx":4,"ny":4,"nz":5,"dtype":"f32","order":"x-fastest"})");
    CHECK(error_of([&] { read_rvol_field(d / "a.rvol"); }).find("payload") != std::string::npos);
}

TEST_CASE("PGM round trip and parsing") {
    const auto d = scratch("pgm");
    Mask2D m(7, 3);
    m.set(0, 0, true);
    m.set(6, 2, true);
    m.set(3, 1, true);
    write_pgm(d / "a.pgm", m);
    CHECK(read_pgm(d / "a.pgm") == m);

    std::string raw = "P5\n# made by hand\n3 # width\n2\n# max\n9\n";
    raw += std::string("\0\5\0\0\0\1", 6);
    write_bytes(d / "b.pgm", raw);
    const auto b = read_pgm(d / "b.pgm");
    CHECK(b.width == 3);
    CHECK(b.height == 2);
    CHECK(b.count() == 2);
    CHECK(b.at(1, 0));
    CHECK(b.at(2, 1));

    write_bytes(d / "c.pgm", "P2\n3 2\n255\n0 0 0 0 0 0\n");
    CHECK_THROWS_AS(read_pgm(d / "c.pgm"), ValidationError);
    write_bytes(d / "d.pgm", "P5\n3 2\n255\n" + std::string(4, '\0'));
    CHECK(error_of([&] { read_pgm(d / "d.pgm"); }).find("truncated") != std::string::npos);
    write_bytes(d / "e.pgm", "P5\n3 2\n300\n" + std::string(6, '\0'));
    CHECK_THROWS_AS(read_pgm(d / "e.pgm"), ValidationError);
}

TEST_CASE("slice stack round trip") {
    const auto d = scratch("stack");
    const auto stack = example_sphere_stack(32);
    write_slice_stack(d, stack);
    CHECK(fs::exists(d / "manifest.json"));
    const auto in = ingest_real_stack(d);
    CHECK(in.stack.grid == stack.grid);
    CHECK(in.stack.axis == stack.axis);
    REQUIRE(in.stack.slices.size() == stack.slices.size());
    for (std::size_t i = 0; i < stack.slices.size(); ++i) {
        CHECK(in.stack.slices[i].plane == stack.slices[i].plane);
        CHECK(in.stack.slices[i].mask == stack.slices[i].mask);
        CHECK(in.report.slices[i].voxels == stack.slices[i].mask.count());
    }
    CHECK(in.report.warnings.empty());

    // Same stack along x.
    const auto dx = scratch("stack_x");
    const auto sx = subsample_slices(example_sphere(32), {8, 16, 24}, 0);
    write_slice_stack(dx, sx);
    CHECK(ingest_real_stack(dx).stack.slices[1].mask == sx.slices[1].mask);
}

TEST_CASE("slice stack ingestion errors and warnings") {
    const auto d = scratch("bad_stack");
    auto stack = example_sphere_stack(32);
    stack.slices[2].mask = Mask2D(32, 32);
    write_slice_stack(d, stack);
    const auto in = ingest_real_stack(d);
    REQUIRE(in.report.warnings.size() == 1);
    CHECK(in.report.warnings[0].find("slice_16") != std::string::npos);

    write_pgm(d / "slice_20.pgm", Mask2D(31, 32));
    const auto msg = error_of([&] { ingest_real_stack(d); });
    CHECK(msg.find("slice_20") != std::string::npos);

    fs::remove(d / "slice_20.pgm");
    CHECK_THROWS_AS(ingest_real_stack(d), ValidationError);
    CHECK_THROWS_AS(ingest_real_stack(d / "missing"), ValidationError);
}

TEST_CASE("eps and tau rules") {
    const auto g = GridSpec(32, 64, 16);
    CHECK(eval_eps_rule("1.5/N", g) == doctest::Approx(1.5 / 64));
    CHECK(eval_eps_rule("0.02", g) == 0.02);
    CHECK_THROWS_AS(eval_eps_rule("1.5/M", g), ValidationError);
    CHECK_THROWS_AS(eval_eps_rule("-1", g), ValidationError);
    CHECK_THROWS_AS(eval_eps_rule("abc", g), ValidationError);
    const double e = 0.05;
    CHECK(eval_tau_rule("eps^3", e) == doctest::Approx(e * e * e));
    CHECK(eval_tau_rule("10*eps^4", e) == doctest::Approx(10 * e * e * e * e));
    CHECK(eval_tau_rule("1e-5", e) == 1e-5);
    CHECK_THROWS_AS(eval_tau_rule("h^3", e), ValidationError);
    CHECK_THROWS_AS(eval_tau_rule("eps^x", e), ValidationError);
    CHECK_THROWS_AS(eval_tau_rule("0", e), ValidationError);
}

TEST_CASE("trace CSV") {
    const auto d = scratch("trace");
    TraceRecord t;
    t.iter = 3;
    t.energy.perimeter_term = 1.5;
    t.energy.willmore_term = 2.5;
    t.energy.total = 4.0;
    t.rel_err = 0.25;
    t.wall_ms = 1.0;
    write_trace_csv(d / "t.csv", {t, t});
    const auto text = slurp(d / "t.csv");
    CHECK(text.rfind("iter,perimeter,willmore,total,rel_err,wall_ms\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
    CHECK(text.find("3,1.5,2.5,4,0.25,1.000000\n") != std::string::npos);
}

TEST_CASE("manifest round trip") {
    ExperimentManifest m;
    m.example = "branching";
    m.n = 48;
    m.planes = {5, 9, 20};
    m.seed = 99;
    m.formulation = Formulation::willmore;
    m.method = Method::admm;
    m.scheme = UpdateScheme::printed;
    m.eps_rule = "2/N";
    m.tau_rule = "3*eps^3";
    m.rho = 4.5;
    m.erosion = 1;
    m.mode = ObstacleMode::exact;
    m.max_iters = 17;
    m.tol_rel = 0.0;
    m.out_u = "x.rvol";
    const auto text = to_json(m);
    const auto back = manifest_from_json(text);
    CHECK(to_json(back) == text);
    CHECK(back.formulation == Formulation::willmore);
    CHECK(back.method == Method::admm);
    CHECK(back.scheme == UpdateScheme::printed);
    CHECK(back.mode == ObstacleMode::exact);
    CHECK(back.planes == m.planes);

    const auto d = scratch("manifest");
    save_manifest(d / "m.json", m);
    CHECK(to_json(load_manifest(d / "m.json")) == text);

    CHECK_THROWS_AS(manifest_from_json("{\"formulation\": \"bogus\"}"), ValidationError);
    CHECK_THROWS_AS(manifest_from_json("[1,2"), ValidationError);
    auto bad = m;
    bad.example = "torus";
    CHECK_THROWS_AS(manifest_stack(bad), ValidationError);
}

TEST_CASE("manifest replay is deterministic") {
    const auto d = scratch("replay");
    ExperimentManifest m;
    m.n = 16;
    m.max_iters = 6;
    m.tol_rel = 0.0;
    m.out_u = (d / "u.rvol").string();
    m.out_trace = (d / "t.csv").string();
    const auto a = run_manifest(m);
    const auto bytes = slurp(d / "u.rvol");
    const auto b = run_manifest(load_manifest([&] {
        save_manifest(d / "m.json", m);
        return d / "m.json";
    }()));
    CHECK(a.iters_done == 6);
    CHECK(a.final_u.data() == b.final_u.data());
    CHECK(slurp(d / "u.rvol") == bytes);
    const auto cfg = manifest_config(m, GridSpec::cube(16));
    CHECK(cfg.eps == doctest::Approx(1.5 / 16));
    CHECK(cfg.tau == doctest::Approx(std::pow(1.5 / 16, 4)));
    CHECK(cfg.record_trace);
}
