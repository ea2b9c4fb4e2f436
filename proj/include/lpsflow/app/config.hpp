#pragma once

// Run configuration: an INI file with named sections plus `section.key=value`
// overrides. Every resolved value (defaults included) is reachable through
// `resolved()` so the manifest can echo it.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "lpsflow/boundary.hpp"
#include "lpsflow/errors.hpp"
#include "lpsflow/mesh.hpp"
#include "lpsflow/stepper.hpp"

namespace lpsflow::app {

class ConfigError : public Error {
public:
    using Error::Error;
};

enum class CaseKind { ShearLayer2D, TGV2D, TGV3D, ManufacturedPoisson, Custom };

inline const char* to_string(CaseKind c) {
    switch (c) {
    case CaseKind::ShearLayer2D: return "shear_layer";
    case CaseKind::TGV2D: return "tgv2d";
    case CaseKind::TGV3D: return "tgv3d";
    case CaseKind::ManufacturedPoisson: return "manufactured_poisson";
    case CaseKind::Custom: return "custom";
    }
    return "?";
}

enum class SnapshotFormat { None, Vtk, Csv };

inline const char* to_string(SnapshotFormat f) {
    switch (f) {
    case SnapshotFormat::None: return "none";
    case SnapshotFormat::Vtk: return "vtk";
    case SnapshotFormat::Csv: return "csv";
    }
    return "?";
}

struct OutputConfig {
    std::string dir = "output";
    int cadence = 10;  ///< diagnostics every N steps (plus t=0 and t_end)
    SnapshotFormat snapshot = SnapshotFormat::None;
    double snapshot_interval = 1.0;
    int workers = 1;
};

struct RunConfig {
    CaseKind case_kind = CaseKind::ShearLayer2D;
    MeshSpec mesh;
    std::optional<QuadratureMode> quadrature;
    double V0 = 1.0;
    double L0 = 1.0;
    std::optional<double> Re;
    FlowConfig flow;
    double cfl_target = 0.3;
    bool dt_from_cfl = false;
    OutflowConfig outflow;
    OutputConfig output;
};

namespace detail {

inline std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (trim(v.substr(pos)).empty()) return x;
    } catch (const std::exception&) {
    }
    throw ConfigError("config: " + key + ": expected a number, got '" + v + "'");
}

inline int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (trim(v.substr(pos)).empty()) return static_cast<int>(x);
    } catch (const std::exception&) {
    }
    throw ConfigError("config: " + key + ": expected an integer, got '" + v + "'");
}

inline std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

template <class Enum>
Enum parse_enum(const std::string& key, const std::string& v, const std::map<std::string, Enum>& table) {
    const auto it = table.find(lower(trim(v)));
    if (it != table.end()) return it->second;
    std::string allowed;
    for (const auto& [name, _] : table) allowed += (allowed.empty() ? "" : "|") + name;
    throw ConfigError("config: " + key + ": unknown value '" + v + "' (expected " + allowed + ")");
}

inline BoundaryKind parse_boundary(const std::string& key, const std::string& v) {
    return parse_enum<BoundaryKind>(key, v,
                                    {{"periodic", BoundaryKind::Periodic},
                                     {"wall", BoundaryKind::DirichletWall},
                                     {"outflow", BoundaryKind::Outflow}});
}

} // namespace detail

/// Known keys per section; anything else is rejected.
inline const std::map<std::string, std::vector<std::string>>& known_keys() {
    static const std::map<std::string, std::vector<std::string>> keys{
        {"case", {"name"}},
        {"mesh", {"dim", "n", "p", "spacing", "quadrature", "lower", "upper", "x_lo", "x_hi", "y_lo", "y_hi", "z_lo",
                  "z_hi"}},
        {"physics", {"nu", "re", "v0", "l0"}},
        {"scheme",
         {"dt", "cfl", "rk", "t_end", "cg_tol", "cg_max_iters", "cfl_limit", "diffusion_theta", "convective_form"}},
        {"stabilization", {"mode", "c_s"}},
        {"outflow", {"u0", "beta"}},
        {"output", {"dir", "cadence", "snapshot", "snapshot_interval", "workers"}},
    };
    return keys;
}

using ConfigTree = boost::property_tree::ptree;

inline ConfigTree read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    ConfigTree tree;
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("config: " + path + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    return tree;
}

inline ConfigTree parse_config_string(const std::string& text) {
    std::istringstream in(text);
    ConfigTree tree;
    try {
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("config: line " + std::to_string(e.line()) + ": " + e.message());
    }
    return tree;
}

/// Apply one `section.key=value` override.
inline void apply_override(ConfigTree& tree, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + assignment + "': expected section.key=value");
    const std::string path = detail::trim(assignment.substr(0, eq));
    const std::string value = detail::trim(assignment.substr(eq + 1));
    const auto dot = path.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == path.size())
        throw ConfigError("override '" + assignment + "': key must be section.key");
    tree.put(boost::property_tree::ptree::path_type(path, '.'), value);
}

/// Keys are case-insensitive; returns a copy with lower-cased section/key names.
inline ConfigTree normalize(const ConfigTree& tree) {
    ConfigTree out;
    for (const auto& [section, body] : tree) {
        if (!body.data().empty() && body.empty())
            throw ConfigError("config: top-level key '" + section + "' must live inside a section");
        const std::string s = detail::lower(section);
        const auto& known = known_keys();
        const auto it = known.find(s);
        if (it == known.end()) throw ConfigError("config: unknown section [" + section + "]");
        for (const auto& [key, value] : body) {
            const std::string k = detail::lower(key);
            if (std::find(it->second.begin(), it->second.end(), k) == it->second.end())
                throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
            out.put(boost::property_tree::ptree::path_type(s + "." + k, '.'), detail::trim(value.data()));
        }
    }
    return out;
}

namespace detail {

/// Domain, element count and time step defaults of each benchmark case.
inline void apply_case_defaults(RunConfig& rc) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    auto& m = rc.mesh;
    m.lower = {0.0, 0.0, 0.0};
    m.upper = {two_pi, two_pi, two_pi};
    m.faces.fill(BoundaryKind::Periodic);
    switch (rc.case_kind) {
    case CaseKind::ShearLayer2D:
        m.dim = 2;
        m.elems = {60, 60, 1};
        m.order = 1;
        rc.flow.scheme.dt = 5e-3;
        rc.flow.scheme.t_end = 8.0;
        rc.flow.physics.nu = 0.0;
        rc.flow.form = ConvectiveForm::SkewSymmetric;
        rc.output.cadence = 20;
        break;
    case CaseKind::TGV3D:
        m.dim = 3;
        m.elems = {16, 16, 16};
        m.order = 2;
        rc.Re = 1600.0;
        rc.flow.scheme.t_end = 20.0;
        rc.dt_from_cfl = true;
        rc.output.cadence = 5;
        break;
    case CaseKind::TGV2D:
        m.dim = 2;
        m.elems = {16, 16, 1};
        m.order = 4;
        rc.flow.physics.nu = 0.01;
        rc.flow.scheme.t_end = 1.0;
        rc.dt_from_cfl = true;
        break;
    case CaseKind::ManufacturedPoisson:
        m.dim = 2;
        m.elems = {8, 8, 1};
        m.order = 2;
        break;
    case CaseKind::Custom:
        m.dim = 2;
        m.elems = {8, 8, 1};
        m.order = 2;
        break;
    }
}

} // namespace detail

/// Resolve a (normalized or raw) tree into a validated RunConfig.
inline RunConfig resolve_config(const ConfigTree& raw) {
    const ConfigTree tree = normalize(raw);
    auto get = [&](const std::string& key) -> std::optional<std::string> {
        const auto v = tree.get_optional<std::string>(boost::property_tree::ptree::path_type(key, '.'));
        if (v && !v->empty()) return *v;
        return std::nullopt;
    };

    RunConfig rc;
    const auto case_name = get("case.name");
    if (!case_name) throw ConfigError("config: [case] name is required");
    rc.case_kind = detail::parse_enum<CaseKind>("case.name", *case_name,
                                                {{"shear_layer", CaseKind::ShearLayer2D},
                                                 {"tgv2d", CaseKind::TGV2D},
                                                 {"tgv3d", CaseKind::TGV3D},
                                                 {"manufactured_poisson", CaseKind::ManufacturedPoisson},
                                                 {"custom", CaseKind::Custom}});
    detail::apply_case_defaults(rc);

    // mesh
    if (auto v = get("mesh.dim")) rc.mesh.dim = detail::parse_int("mesh.dim", *v);
    if (rc.mesh.dim < 1 || rc.mesh.dim > 3) throw ConfigError("config: mesh.dim must be 1, 2 or 3");
    if (auto v = get("mesh.n")) {
        const auto items = detail::split_list(*v);
        if (items.size() == 1) {
            const int n = detail::parse_int("mesh.n", items[0]);
            rc.mesh.elems = {n, rc.mesh.dim > 1 ? n : 1, rc.mesh.dim > 2 ? n : 1};
        } else if (static_cast<int>(items.size()) == rc.mesh.dim) {
            rc.mesh.elems = {1, 1, 1};
            for (int a = 0; a < rc.mesh.dim; ++a) rc.mesh.elems[a] = detail::parse_int("mesh.n", items[a]);
        } else {
            throw ConfigError("config: mesh.n must hold 1 or dim comma-separated integers");
        }
    }
    for (int a = rc.mesh.dim; a < 3; ++a) rc.mesh.elems[a] = 1;
    if (auto v = get("mesh.p")) rc.mesh.order = detail::parse_int("mesh.p", *v);
    if (auto v = get("mesh.spacing"))
        rc.mesh.spacing = detail::parse_enum<NodeSpacing>(
            "mesh.spacing", *v, {{"gll", NodeSpacing::GLL}, {"equispaced", NodeSpacing::Equispaced}});
    if (auto v = get("mesh.quadrature")) {
        const std::string q = detail::lower(*v);
        if (q == "natural") rc.quadrature.reset();
        else if (q == "collocated") rc.quadrature = QuadratureMode::collocated();
        else if (q == "gauss") rc.quadrature = QuadratureMode::gauss();
        else if (q == "over") rc.quadrature = QuadratureMode::over_integrated(3 * rc.mesh.order);
        else throw ConfigError("config: mesh.quadrature: unknown value '" + *v + "' (expected natural|collocated|gauss|over)");
    }
    for (const char* bound : {"lower", "upper"}) {
        const std::string key = std::string("mesh.") + bound;
        if (auto v = get(key)) {
            const auto items = detail::split_list(*v);
            auto& target = std::string(bound) == "lower" ? rc.mesh.lower : rc.mesh.upper;
            if (items.size() == 1) {
                target.fill(detail::parse_double(key, items[0]));
            } else if (static_cast<int>(items.size()) == rc.mesh.dim) {
                for (int a = 0; a < rc.mesh.dim; ++a) target[a] = detail::parse_double(key, items[a]);
            } else {
                throw ConfigError("config: " + key + " must hold 1 or dim comma-separated numbers");
            }
        }
    }
    static const std::array<const char*, 6> face_keys{"x_lo", "x_hi", "y_lo", "y_hi", "z_lo", "z_hi"};
    for (int f = 0; f < 6; ++f) {
        const std::string key = std::string("mesh.") + face_keys[f];
        if (auto v = get(key)) rc.mesh.faces[f] = detail::parse_boundary(key, *v);
    }

    // physics
    if (auto v = get("physics.v0")) rc.V0 = detail::parse_double("physics.v0", *v);
    if (auto v = get("physics.l0")) rc.L0 = detail::parse_double("physics.l0", *v);
    const auto nu = get("physics.nu");
    const auto re = get("physics.re");
    if (re) rc.Re = detail::parse_double("physics.re", *re);
    if (nu) {
        rc.flow.physics.nu = detail::parse_double("physics.nu", *nu);
        if (re) {
            const double implied = rc.V0 * rc.L0 / *rc.Re;
            if (std::abs(implied - rc.flow.physics.nu) > 1e-12 * std::max(1.0, std::abs(implied)))
                throw ConfigError("config: physics.nu is inconsistent with Re, V0 and L0 (nu = V0*L0/Re)");
        } else {
            rc.Re.reset();
        }
    } else if (rc.Re) {
        if (!(*rc.Re > 0.0)) throw ConfigError("config: physics.re must be > 0");
        rc.flow.physics.nu = rc.V0 * rc.L0 / *rc.Re;
    }

    // scheme
    auto& s = rc.flow.scheme;
    if (auto v = get("scheme.cfl")) {
        rc.cfl_target = detail::parse_double("scheme.cfl", *v);
        rc.dt_from_cfl = true;
    }
    if (auto v = get("scheme.dt")) {
        s.dt = detail::parse_double("scheme.dt", *v);
        rc.dt_from_cfl = false;
    }
    if (auto v = get("scheme.rk"))
        s.rk = detail::parse_enum<RkScheme>("scheme.rk", *v,
                                            {{"euler1", RkScheme::Euler1},
                                             {"heun2", RkScheme::Heun2},
                                             {"ssprk3", RkScheme::SSPRK3}});
    if (auto v = get("scheme.t_end")) s.t_end = detail::parse_double("scheme.t_end", *v);
    if (auto v = get("scheme.cg_tol")) s.cg_tol = detail::parse_double("scheme.cg_tol", *v);
    if (auto v = get("scheme.cg_max_iters")) s.cg_max_iters = detail::parse_int("scheme.cg_max_iters", *v);
    if (auto v = get("scheme.cfl_limit")) s.cfl_limit = detail::parse_double("scheme.cfl_limit", *v);
    if (auto v = get("scheme.diffusion_theta"))
        s.diffusion_theta = detail::parse_double("scheme.diffusion_theta", *v);
    if (auto v = get("scheme.convective_form"))
        rc.flow.form = detail::parse_enum<ConvectiveForm>("scheme.convective_form", *v,
                                                          {{"conservative", ConvectiveForm::Conservative},
                                                           {"nonconservative", ConvectiveForm::NonConservative},
                                                           {"skew", ConvectiveForm::SkewSymmetric}});

    // stabilization
    if (auto v = get("stabilization.mode"))
        rc.flow.stab.mode = detail::parse_enum<StabilizationMode>("stabilization.mode", *v,
                                                                  {{"none", StabilizationMode::None},
                                                                   {"upwind", StabilizationMode::LowOrderUpwind},
                                                                   {"lps", StabilizationMode::LPS}});
    if (auto v = get("stabilization.c_s")) rc.flow.stab.c_s = detail::parse_double("stabilization.c_s", *v);

    // outflow
    if (auto v = get("outflow.u0")) rc.outflow.U0 = detail::parse_double("outflow.u0", *v);
    if (auto v = get("outflow.beta")) rc.outflow.beta = detail::parse_double("outflow.beta", *v);

    // output
    if (auto v = get("output.dir")) rc.output.dir = *v;
    if (auto v = get("output.cadence")) rc.output.cadence = detail::parse_int("output.cadence", *v);
    if (auto v = get("output.snapshot"))
        rc.output.snapshot = detail::parse_enum<SnapshotFormat>(
            "output.snapshot", *v,
            {{"none", SnapshotFormat::None}, {"vtk", SnapshotFormat::Vtk}, {"csv", SnapshotFormat::Csv}});
    if (auto v = get("output.snapshot_interval"))
        rc.output.snapshot_interval = detail::parse_double("output.snapshot_interval", *v);
    if (auto v = get("output.workers")) rc.output.workers = detail::parse_int("output.workers", *v);

    if (rc.output.cadence < 1) throw ConfigError("config: output.cadence must be >= 1");
    if (rc.output.workers < 1) throw ConfigError("config: output.workers must be >= 1");
    if (!(rc.output.snapshot_interval > 0.0)) throw ConfigError("config: output.snapshot_interval must be > 0");
    if (!(s.t_end > 0.0)) throw ConfigError("config: scheme.t_end must be > 0");
    if (rc.dt_from_cfl && !(rc.cfl_target > 0.0)) throw ConfigError("config: scheme.cfl must be > 0");
    try {
        Mesh check(rc.mesh);
        if (rc.quadrature) make_element_rule(check.basis(), *rc.quadrature);
        if (!rc.dt_from_cfl) s.validate();
        rc.flow.physics.validate();
        rc.flow.stab.validate();
        rc.outflow.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return rc;
}

/// dt = cfl * h / (p * V0) for cases that leave dt unset.
inline double dt_from_cfl(const RunConfig& rc) {
    const Mesh m(rc.mesh);
    return rc.cfl_target * m.element_size(0) / (m.order() * rc.V0);
}

/// Flat key/value view of the resolved configuration (used by the manifest).
inline std::map<std::string, std::string> resolved(const RunConfig& rc) {
    std::map<std::string, std::string> kv;
    auto num = [](double x) {
        std::ostringstream os;
        os.precision(17);
        os << x;
        return os.str();
    };
    auto list = [&](auto get, int n) {
        std::string s;
        for (int a = 0; a < n; ++a) s += (a ? "," : "") + get(a);
        return s;
    };
    const int d = rc.mesh.dim;
    kv["case.name"] = to_string(rc.case_kind);
    kv["mesh.dim"] = std::to_string(d);
    kv["mesh.n"] = list([&](int a) { return std::to_string(rc.mesh.elems[a]); }, d);
    kv["mesh.p"] = std::to_string(rc.mesh.order);
    kv["mesh.spacing"] = rc.mesh.spacing == NodeSpacing::GLL ? "gll" : "equispaced";
    const QuadratureMode q = rc.quadrature.value_or(QuadratureMode::natural(rc.mesh.spacing));
    kv["mesh.quadrature"] = q.kind == QuadratureMode::Kind::Collocated ? "collocated"
                            : q.kind == QuadratureMode::Kind::Gauss  ? "gauss"
                                                                     : "over";
    kv["mesh.lower"] = list([&](int a) { return num(rc.mesh.lower[a]); }, d);
    kv["mesh.upper"] = list([&](int a) { return num(rc.mesh.upper[a]); }, d);
    static const std::array<const char*, 6> face_keys{"x_lo", "x_hi", "y_lo", "y_hi", "z_lo", "z_hi"};
    for (int f = 0; f < 2 * d; ++f) {
        const auto k = rc.mesh.faces[f];
        kv[std::string("mesh.") + face_keys[f]] = k == BoundaryKind::Periodic        ? "periodic"
                                                  : k == BoundaryKind::DirichletWall ? "wall"
                                                                                     : "outflow";
    }
    kv["physics.nu"] = num(rc.flow.physics.nu);
    kv["physics.v0"] = num(rc.V0);
    kv["physics.l0"] = num(rc.L0);
    if (rc.Re) kv["physics.re"] = num(*rc.Re);
    const auto& s = rc.flow.scheme;
    kv["scheme.dt"] = num(rc.dt_from_cfl ? dt_from_cfl(rc) : s.dt);
    kv["scheme.cfl"] = num(rc.cfl_target);
    kv["scheme.rk"] = to_string(s.rk);
    kv["scheme.t_end"] = num(s.t_end);
    kv["scheme.cg_tol"] = num(s.cg_tol);
    kv["scheme.cg_max_iters"] = std::to_string(s.cg_max_iters);
    kv["scheme.cfl_limit"] = num(s.cfl_limit);
    kv["scheme.diffusion_theta"] = num(s.diffusion_theta);
    kv["scheme.convective_form"] = rc.flow.form == ConvectiveForm::SkewSymmetric ? "skew" : to_string(rc.flow.form);
    kv["stabilization.mode"] = to_string(rc.flow.stab.mode);
    kv["stabilization.c_s"] = num(rc.flow.stab.c_s);
    kv["outflow.u0"] = num(rc.outflow.U0);
    kv["outflow.beta"] = num(rc.outflow.beta);
    kv["output.dir"] = rc.output.dir;
    kv["output.cadence"] = std::to_string(rc.output.cadence);
    kv["output.snapshot"] = to_string(rc.output.snapshot);
    kv["output.snapshot_interval"] = num(rc.output.snapshot_interval);
    kv["output.workers"] = std::to_string(rc.output.workers);
    return kv;
}

/// Render the resolved configuration back to INI text; resolving it again
/// yields the same configuration.
inline std::string to_ini(const RunConfig& rc) {
    std::map<std::string, std::map<std::string, std::string>> sections;
    for (const auto& [k, v] : resolved(rc)) {
        const auto dot = k.find('.');
        sections[k.substr(0, dot)][k.substr(dot + 1)] = v;
    }
    // nu and Re must not both be echoed when Re drives nu, since rounding could
    // trip the consistency check
    if (rc.Re) sections["physics"].erase("nu");
    sections["scheme"].erase("cfl");
    std::ostringstream os;
    for (const auto& [sec, keys] : sections) {
        os << '[' << sec << "]\n";
        for (const auto& [k, v] : keys) os << k << " = " << v << '\n';
        os << '\n';
    }
    return os.str();
}

struct Preset {
    std::string name;
    std::string description;
    std::string ini;
};

inline const std::vector<Preset>& presets() {
    static const std::vector<Preset> list{
        {"shear_layer", "2D double shear layer, 60x60 DoFs P1, skew form + LPS, dt=5e-3, t_end=8",
         "[case]\nname = shear_layer\n\n[mesh]\nn = 60\np = 1\n\n[scheme]\ndt = 5e-3\nt_end = 8\nconvective_form = "
         "skew\n\n[stabilization]\nmode = lps\nc_s = 1\n"},
        {"tgv3d", "3D Taylor-Green vortex, Re=1600, 32^3 DoFs P2 spectral + LPS, dt from CFL 0.3, t_end=20",
         "[case]\nname = tgv3d\n\n[mesh]\nn = 16\np = 2\nspacing = gll\n\n[physics]\nre = 1600\nv0 = 1\nl0 = "
         "1\n\n[scheme]\ncfl = 0.3\nt_end = 20\nrk = heun2\n\n[stabilization]\nmode = lps\n"},
        {"tgv2d", "2D analytic Taylor-Green vortex, nu=0.01, 16^2 elements P4, t_end=1",
         "[case]\nname = tgv2d\n\n[mesh]\nn = 16\np = 4\n\n[physics]\nnu = 0.01\n\n[scheme]\ncfl = 0.3\nt_end = "
         "1\n\n[stabilization]\nmode = none\n"},
        {"manufactured_poisson", "periodic Poisson problem with a product-of-sines solution",
         "[case]\nname = manufactured_poisson\n\n[mesh]\ndim = 2\nn = 8\np = 2\n"},
    };
    return list;
}

} // namespace lpsflow::app
