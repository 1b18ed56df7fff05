#include "pfsurf/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pfsurf/synth.hpp"

namespace pfsurf {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::ofstream open_write(const fs::path& path, bool binary) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw ValidationError("cannot open '" + path.string() + "' for writing");
    return out;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ordered_json parse_json(const std::string& text, const std::string& source) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(source + ": " + e.what());
    }
}

template <class T>
T field(const ordered_json& j, const char* key, const std::string& source) {
    if (!j.contains(key)) throw ValidationError(source + ": missing field '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ValidationError(source + ": field '" + key + "' has the wrong type");
    }
}

template <class T>
T field_or(const ordered_json& j, const char* key, T fallback, const std::string& source) {
    return j.contains(key) ? field<T>(j, key, source) : fallback;
}

std::uint32_t to_le(std::uint32_t v) {
    if constexpr (std::endian::native == std::endian::big) return __builtin_bswap32(v);
    return v;
}

void write_sidecar(const fs::path& path, const GridSpec& g, const char* dtype) {
    ordered_json j;
    j["nx"] = g.nx;
    j["ny"] = g.ny;
    j["nz"] = g.nz;
    j["dtype"] = dtype;
    j["order"] = "x-fastest";
    open_write(rvol_sidecar(path), false) << j.dump(2) << '\n';
}

std::string read_payload(const fs::path& path, const RvolHeader& h) {
    const auto bytes = slurp(path);
    const std::size_t width = h.dtype == RvolType::f32 ? 4 : 1;
    if (bytes.size() != h.grid.size() * width) {
        throw ValidationError(path.string() + ": payload has " + std::to_string(bytes.size()) +
                              " bytes, expected " + std::to_string(h.grid.size() * width));
    }
    return bytes;
}

const char* mode_name(ObstacleMode m) { return m == ObstacleMode::exact ? "exact" : "indicator"; }

ObstacleMode parse_mode(const std::string& s) {
    if (s == "exact") return ObstacleMode::exact;
    if (s == "indicator") return ObstacleMode::indicator;
    throw ValidationError("unknown obstacle mode '" + s + "' (expected exact or indicator)");
}

double parse_positive(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || !(v > 0) || !std::isfinite(v)) {
        throw ValidationError("malformed " + what + " '" + s + "'");
    }
    return v;
}

}  // namespace

fs::path rvol_sidecar(const fs::path& path) { return fs::path(path.string() + ".json"); }

void write_rvol(const fs::path& path, const ScalarField3D& u) {
    std::string payload(u.size() * 4, '\0');
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto bits = to_le(std::bit_cast<std::uint32_t>(static_cast<float>(u[i])));
        std::memcpy(payload.data() + 4 * i, &bits, 4);
    }
    open_write(path, true) << payload;
    write_sidecar(path, u.spec(), "f32");
}

void write_rvol(const fs::path& path, const BinaryVolume& vol) {
    const auto& b = vol.bits();
    open_write(path, true).write(reinterpret_cast<const char*>(b.data()),
                                 static_cast<std::streamsize>(b.size()));
    write_sidecar(path, vol.spec(), "u8");
}

RvolHeader read_rvol_header(const fs::path& path) {
    const auto side = rvol_sidecar(path);
    const std::string src = side.string();
    const auto j = parse_json(slurp(side), src);
    RvolHeader h;
    const int nx = field<int>(j, "nx", src), ny = field<int>(j, "ny", src),
              nz = field<int>(j, "nz", src);
    try {
        h.grid = GridSpec(nx, ny, nz);
    } catch (const Error& e) {
        throw ValidationError(src + ": " + e.what());
    }
    const auto dtype = field<std::string>(j, "dtype", src);
    if (dtype == "f32") {
        h.dtype = RvolType::f32;
    } else if (dtype == "u8") {
        h.dtype = RvolType::u8;
    } else {
        throw ValidationError(src + ": field 'dtype' must be f32 or u8, got '" + dtype + "'");
    }
    const auto order = field_or<std::string>(j, "order", "x-fastest", src);
    if (order != "x-fastest") {
        throw ValidationError(src + ": field 'order' must be x-fastest, got '" + order + "'");
    }
    return h;
}

ScalarField3D read_rvol_field(const fs::path& path) {
    const auto h = read_rvol_header(path);
    const auto bytes = read_payload(path, h);
    ScalarField3D u(h.grid);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (h.dtype == RvolType::u8) {
            u[i] = static_cast<unsigned char>(bytes[i]);
        } else {
            std::uint32_t bits;
            std::memcpy(&bits, bytes.data() + 4 * i, 4);
            u[i] = std::bit_cast<float>(to_le(bits));
        }
    }
    return u;
}

BinaryVolume read_rvol_mask(const fs::path& path) {
    const auto h = read_rvol_header(path);
    if (h.dtype != RvolType::u8) {
        throw ValidationError(rvol_sidecar(path).string() + ": field 'dtype' must be u8 for a mask");
    }
    const auto bytes = read_payload(path, h);
    std::vector<std::uint8_t> bits(bytes.begin(), bytes.end());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] > 1) {
            throw ValidationError(path.string() + ": byte " + std::to_string(i) + " is " +
                                  std::to_string(bits[i]) + ", masks hold only 0 or 1");
        }
    }
    return BinaryVolume(h.grid, std::move(bits));
}

void write_pgm(const fs::path& path, const Mask2D& mask) {
    auto out = open_write(path, true);
    out << "P5\n" << mask.width << ' ' << mask.height << "\n255\n";
    std::string row(mask.size(), '\0');
    for (std::size_t i = 0; i < mask.size(); ++i) row[i] = mask.bits[i] ? '\xff' : '\0';
    out << row;
}

Mask2D read_pgm(const fs::path& path) {
    const auto bytes = slurp(path);
    const std::string src = path.string();
    std::size_t pos = 0;
    // Header tokens are separated by whitespace; '#' starts a comment.
    auto token = [&]() {
        while (pos < bytes.size()) {
            if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
                ++pos;
            } else if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
        const auto start = pos;
        while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
        return bytes.substr(start, pos - start);
    };
    auto number = [&](const char* what) {
        const auto t = token();
        if (t.empty() || !std::all_of(t.begin(), t.end(), ::isdigit)) {
            throw ValidationError(src + ": bad PGM " + what + " '" + t + "'");
        }
        return std::stoi(t);
    };
    if (token() != "P5") throw ValidationError(src + ": not a binary PGM (P5)");
    const int w = number("width"), h = number("height"), maxval = number("maxval");
    if (w <= 0 || h <= 0) throw ValidationError(src + ": PGM size must be positive");
    if (maxval < 1 || maxval > 255) {
        throw ValidationError(src + ": PGM maxval must be in 1..255, got " + std::to_string(maxval));
    }
    ++pos;  // single whitespace byte after maxval
    Mask2D m(w, h);
    if (bytes.size() < pos + m.size()) throw ValidationError(src + ": PGM pixel data is truncated");
    for (std::size_t i = 0; i < m.size(); ++i) m.bits[i] = bytes[pos + i] != 0 ? 1 : 0;
    return m;
}

void write_slice_stack(const fs::path& dir, const SliceStack& stack) {
    stack.validate();
    fs::create_directories(dir);
    ordered_json j;
    j["axis"] = stack.axis;
    j["grid"] = {stack.grid.nx, stack.grid.ny, stack.grid.nz};
    j["planes"] = ordered_json::array();
    for (const auto& s : stack.slices) {
        write_pgm(dir / ("slice_" + std::to_string(s.plane) + ".pgm"), s.mask);
        j["planes"].push_back(s.plane);
    }
    open_write(dir / "manifest.json", false) << j.dump(2) << '\n';
}

IngestedStack ingest_real_stack(const fs::path& dir, const std::optional<fs::path>& manifest) {
    const auto mpath = manifest.value_or(dir / "manifest.json");
    const std::string src = mpath.string();
    const auto j = parse_json(slurp(mpath), src);
    IngestedStack out;
    auto& st = out.stack;
    st.axis = field<int>(j, "axis", src);
    if (st.axis < 0 || st.axis > 2) throw ValidationError(src + ": field 'axis' must be 0, 1 or 2");
    const auto g = field<std::vector<int>>(j, "grid", src);
    if (g.size() != 3) throw ValidationError(src + ": field 'grid' must hold 3 counts");
    try {
        st.grid = GridSpec(g[0], g[1], g[2]);
    } catch (const Error& e) {
        throw ValidationError(src + ": field 'grid': " + e.what());
    }
    const auto planes = field<std::vector<int>>(j, "planes", src);
    if (planes.empty()) throw ValidationError(src + ": field 'planes' is empty");

    const auto geo = PlaneGeometry::of(st.grid, st.axis);
    for (int p : planes) {
        const auto file = dir / ("slice_" + std::to_string(p) + ".pgm");
        auto mask = read_pgm(file);
        if (mask.width != geo.width || mask.height != geo.height) {
            throw ValidationError(file.string() + ": slice is " + std::to_string(mask.width) + "x" +
                                  std::to_string(mask.height) + ", expected " +
                                  std::to_string(geo.width) + "x" + std::to_string(geo.height));
        }
        const auto count = mask.count();
        out.report.slices.push_back({p, file.string(), count});
        if (count == 0) out.report.warnings.push_back(file.string() + ": slice is empty");
        st.slices.push_back({p, std::move(mask)});
    }
    try {
        st.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(src + ": " + e.what());
    }
    return out;
}

void write_trace_csv(const fs::path& path, const std::vector<TraceRecord>& trace) {
    auto out = open_write(path, false);
    out << "iter,perimeter,willmore,total,rel_err,wall_ms\n";
    char buf[192];
    for (const auto& t : trace) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.6f\n", t.iter,
                      t.energy.perimeter_term, t.energy.willmore_term, t.energy.total, t.rel_err,
                      t.wall_ms);
        out << buf;
    }
}

double eval_eps_rule(const std::string& rule, const GridSpec& grid) {
    const auto slash = rule.find('/');
    if (slash == std::string::npos) return parse_positive(rule, "eps rule");
    if (rule.substr(slash + 1) != "N") throw ValidationError("malformed eps rule '" + rule + "'");
    const double c = parse_positive(rule.substr(0, slash), "eps rule");
    return c / std::max({grid.nx, grid.ny, grid.nz});
}

double eval_tau_rule(const std::string& rule, double eps) {
    const auto caret = rule.find('^');
    if (caret == std::string::npos) return parse_positive(rule, "tau rule");
    auto base = rule.substr(0, caret);
    double c = 1.0;
    if (const auto star = base.find('*'); star != std::string::npos) {
        c = parse_positive(base.substr(0, star), "tau rule");
        base = base.substr(star + 1);
    }
    if (base != "eps") throw ValidationError("malformed tau rule '" + rule + "'");
    const double p = parse_positive(rule.substr(caret + 1), "tau rule exponent");
    return c * std::pow(eps, p);
}

std::string to_json(const ExperimentManifest& m) {
    ordered_json j;
    j["example"] = m.example;
    j["n"] = m.n;
    j["stack_dir"] = m.stack_dir;
    j["axis"] = m.axis;
    j["planes"] = m.planes;
    j["seed"] = m.seed;
    j["formulation"] = to_string(m.formulation);
    j["method"] = to_string(m.method);
    j["scheme"] = to_string(m.scheme);
    j["eps_rule"] = m.eps_rule;
    j["tau_rule"] = m.tau_rule;
    j["rho"] = m.rho;
    j["alpha"] = m.alpha;
    j["erosion"] = m.erosion;
    j["mode"] = mode_name(m.mode);
    j["max_iters"] = m.max_iters;
    j["tol_rel"] = m.tol_rel;
    j["tol_energy"] = m.tol_energy;
    j["out_u"] = m.out_u;
    j["out_trace"] = m.out_trace;
    return j.dump(2);
}

ExperimentManifest manifest_from_json(const std::string& text, const std::string& src) {
    const auto j = parse_json(text, src);
    ExperimentManifest m;
    m.example = field_or<std::string>(j, "example", m.example, src);
    m.n = field_or<int>(j, "n", m.n, src);
    m.stack_dir = field_or<std::string>(j, "stack_dir", m.stack_dir, src);
    m.axis = field_or<int>(j, "axis", m.axis, src);
    m.planes = field_or<std::vector<int>>(j, "planes", m.planes, src);
    m.seed = field_or<std::uint64_t>(j, "seed", m.seed, src);
    try {
        m.formulation = parse_formulation(field_or<std::string>(j, "formulation", "elastica", src));
        m.method = parse_method(field_or<std::string>(j, "method", "pgdm", src));
        m.scheme = parse_update_scheme(field_or<std::string>(j, "scheme", "gradient", src));
        m.mode = parse_mode(field_or<std::string>(j, "mode", "indicator", src));
    } catch (const Error& e) {
        throw ValidationError(src + ": " + e.what());
    }
    m.eps_rule = field_or<std::string>(j, "eps_rule", m.eps_rule, src);
    m.tau_rule = field_or<std::string>(j, "tau_rule", m.tau_rule, src);
    m.rho = field_or<double>(j, "rho", m.rho, src);
    m.alpha = field_or<double>(j, "alpha", m.alpha, src);
    m.erosion = field_or<int>(j, "erosion", m.erosion, src);
    m.max_iters = field_or<int>(j, "max_iters", m.max_iters, src);
    m.tol_rel = field_or<double>(j, "tol_rel", m.tol_rel, src);
    m.tol_energy = field_or<double>(j, "tol_energy", m.tol_energy, src);
    m.out_u = field_or<std::string>(j, "out_u", m.out_u, src);
    m.out_trace = field_or<std::string>(j, "out_trace", m.out_trace, src);
    return m;
}

void save_manifest(const fs::path& path, const ExperimentManifest& m) {
    open_write(path, false) << to_json(m) << '\n';
}

ExperimentManifest load_manifest(const fs::path& path) {
    return manifest_from_json(slurp(path), path.string());
}

SliceStack manifest_stack(const ExperimentManifest& m) {
    if (m.example == "stack") return ingest_real_stack(m.stack_dir).stack;
    BinaryVolume vol;
    if (m.example == "sphere") {
        vol = example_sphere(m.n);
        if (m.planes.empty()) return example_sphere_stack(m.n);
    } else if (m.example == "branching") {
        vol = example_branching(m.n);
        if (m.planes.empty()) return example_branching_stack(m.n, m.seed);
    } else {
        throw ValidationError("unknown example '" + m.example + "' (expected sphere, branching or stack)");
    }
    return subsample_slices(vol, m.planes, m.axis);
}

SolverConfig manifest_config(const ExperimentManifest& m, const GridSpec& grid) {
    SolverConfig cfg;
    cfg.formulation = m.formulation;
    cfg.method = m.method;
    cfg.scheme = m.scheme;
    cfg.eps = eval_eps_rule(m.eps_rule, grid);
    cfg.tau = eval_tau_rule(m.tau_rule, cfg.eps);
    cfg.rho = m.rho;
    cfg.max_iters = m.max_iters;
    cfg.tol_rel = m.tol_rel;
    cfg.tol_energy = m.tol_energy;
    cfg.obstacle_mode = m.mode;
    cfg.record_trace = !m.out_trace.empty();
    cfg.validate();
    return cfg;
}

SolverRun run_manifest(const ExperimentManifest& m) {
    const auto stack = manifest_stack(m);
    const auto cfg = manifest_config(m, stack.grid);
    const auto problem = problem_from_stack(stack, cfg, m.alpha, m.erosion);
    auto result = run(problem, cfg);
    if (!m.out_u.empty()) write_rvol(m.out_u, result.final_u);
    if (!m.out_trace.empty()) write_trace_csv(m.out_trace, result.trace);
    return result;
}

}  // namespace pfsurf
