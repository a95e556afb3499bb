#include "protmeas/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "protmeas/errors.hpp"

namespace protmeas {

namespace fs = std::filesystem;

namespace {

std::string line_of(const toml::node& node) {
    const auto& src = node.source();
    if (src.begin.line == 0) return {};
    return "line " + std::to_string(src.begin.line) + ": ";
}

std::string join(std::string_view prefix, std::string_view key) {
    if (prefix.empty()) return std::string(key);
    return std::string(prefix) + "." + std::string(key);
}

void check_keys(const toml::table& table, std::string_view prefix, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, node] : table) {
        if (std::find(allowed.begin(), allowed.end(), key.str()) == allowed.end())
            throw ConfigError(join(prefix, key.str()), line_of(node) + "unknown key");
    }
}

double number_of(const toml::node& node, const std::string& field) {
    if (auto v = node.value<double>()) return *v;
    throw ConfigError(field, line_of(node) + "expected a number");
}

double get_number(const toml::table& t, std::string_view key, std::string_view prefix, double fallback) {
    const toml::node* node = t.get(key);
    return node ? number_of(*node, join(prefix, key)) : fallback;
}

int get_int(const toml::table& t, std::string_view key, std::string_view prefix, int fallback) {
    const toml::node* node = t.get(key);
    if (!node) return fallback;
    if (auto v = node->value_exact<int64_t>()) return static_cast<int>(*v);
    throw ConfigError(join(prefix, key), line_of(*node) + "expected an integer");
}

std::string get_string(const toml::table& t, std::string_view key, std::string_view prefix,
                       std::string fallback) {
    const toml::node* node = t.get(key);
    if (!node) return fallback;
    if (auto v = node->value_exact<std::string>()) return *v;
    throw ConfigError(join(prefix, key), line_of(*node) + "expected a string");
}

const toml::table* get_table(const toml::table& t, std::string_view key) {
    const toml::node* node = t.get(key);
    if (!node) return nullptr;
    if (const auto* table = node->as_table()) return table;
    throw ConfigError(std::string(key), line_of(*node) + "expected a table");
}

Complex complex_of(const toml::node& node, const std::string& field) {
    if (const auto* pair = node.as_array()) {
        if (pair->size() != 2) throw ConfigError(field, line_of(node) + "expected [re, im]");
        return {number_of(*pair->get(0), field), number_of(*pair->get(1), field)};
    }
    return {number_of(node, field), 0.0};
}

SystemConfig parse_system(const toml::table& t, std::string_view prefix) {
    check_keys(t, prefix, {"energies", "observable", "initial_level"});
    SystemConfig sys;
    const std::string ef = join(prefix, "energies");
    const toml::node* energies = t.get("energies");
    if (!energies) throw ConfigError(ef, "missing");
    const auto* earr = energies->as_array();
    if (!earr || earr->empty()) throw ConfigError(ef, line_of(*energies) + "expected a non-empty array of numbers");
    sys.energies.resize(static_cast<Eigen::Index>(earr->size()));
    for (std::size_t i = 0; i < earr->size(); ++i)
        sys.energies(static_cast<Eigen::Index>(i)) = number_of(*earr->get(i), ef + "[" + std::to_string(i) + "]");

    const std::string of = join(prefix, "observable");
    const toml::node* observable = t.get("observable");
    if (!observable) throw ConfigError(of, "missing");
    const auto* rows = observable->as_array();
    if (!rows || rows->empty()) throw ConfigError(of, line_of(*observable) + "expected an array of rows");
    const auto d = static_cast<Eigen::Index>(rows->size());
    std::size_t cols = 0;
    for (std::size_t i = 0; i < rows->size(); ++i) {
        const auto* row = rows->get(i)->as_array();
        const std::string rf = of + "[" + std::to_string(i) + "]";
        if (!row) throw ConfigError(rf, line_of(*rows->get(i)) + "expected a row array");
        if (i == 0) cols = row->size();
        if (row->size() != cols || static_cast<Eigen::Index>(row->size()) != d) {
            std::ostringstream msg;
            msg << line_of(*rows->get(i)) << "observable must be square: row " << i << " has " << row->size()
                << " entries but there are " << d << " rows";
            throw ConfigError(rf, msg.str());
        }
    }
    sys.observable.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const auto* row = rows->get(static_cast<std::size_t>(i))->as_array();
        for (Eigen::Index j = 0; j < d; ++j)
            sys.observable(i, j) = complex_of(*row->get(static_cast<std::size_t>(j)),
                                              of + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
    if (sys.observable.rows() != sys.energies.size()) {
        std::ostringstream msg;
        msg << line_of(*observable) << "observable is " << d << "x" << d << " but there are " << sys.energies.size()
            << " energies";
        throw ConfigError(of, msg.str());
    }
    sys.initial_level = get_int(t, "initial_level", prefix, 0);
    return sys;
}

ProfileConfig parse_profile(const toml::table& t, std::string_view prefix, const fs::path& base_dir) {
    check_keys(t, prefix, {"kind", "T", "duration", "turn_on_fraction", "area", "csv"});
    ProfileConfig p;
    p.kind = get_string(t, "kind", prefix, p.kind);
    try {
        (void)parse_profile_kind(p.kind);
    } catch (const ValidationError& e) {
        throw ConfigError(join(prefix, "kind"), line_of(*t.get("kind")) + e.what());
    }
    p.duration = get_number(t, "T", prefix, get_number(t, "duration", prefix, p.duration));
    p.turn_on_fraction = get_number(t, "turn_on_fraction", prefix, p.turn_on_fraction);
    p.area = get_number(t, "area", prefix, p.area);
    const std::string csv = get_string(t, "csv", prefix, "");
    if (!csv.empty()) {
        p.csv = base_dir.empty() ? fs::path(csv) : base_dir / csv;
        if (!t.get("kind")) p.kind = "sampled";
    }
    if (p.kind == "sampled" && p.csv.empty()) throw ConfigError(join(prefix, "csv"), "sampled profiles need a csv path");
    return p;
}

PointerConfig parse_pointer(const toml::table& t) {
    check_keys(t, "pointer", {"x0", "sigma_x", "grid_size", "grid_span", "apparatus"});
    PointerConfig p;
    p.x0 = get_number(t, "x0", "pointer", p.x0);
    p.sigma_x = get_number(t, "sigma_x", "pointer", p.sigma_x);
    p.grid_size = get_int(t, "grid_size", "pointer", p.grid_size);
    p.grid_span = get_number(t, "grid_span", "pointer", p.grid_span);
    if (const toml::node* app = t.get("apparatus")) {
        if (auto s = app->value_exact<std::string>()) {
            if (*s != "static") throw ConfigError("pointer.apparatus", line_of(*app) + "expected \"static\" or { free = { mass } }");
        } else if (const auto* table = app->as_table()) {
            const auto* free = get_table(*table, "free");
            if (!free) throw ConfigError("pointer.apparatus", line_of(*app) + "expected { free = { mass } }");
            check_keys(*free, "pointer.apparatus.free", {"mass"});
            p.apparatus = FreeApparatus{get_number(*free, "mass", "pointer.apparatus.free", 1.0)};
        } else {
            throw ConfigError("pointer.apparatus", line_of(*app) + "expected \"static\" or { free = { mass } }");
        }
    }
    return p;
}

ScanConfig parse_scan(const toml::table& t) {
    check_keys(t, "scan", {"x_lo", "x_hi", "points", "fit_x_min", "profiles"});
    ScanConfig s;
    s.x_lo = get_number(t, "x_lo", "scan", s.x_lo);
    s.x_hi = get_number(t, "x_hi", "scan", s.x_hi);
    s.points = get_int(t, "points", "scan", s.points);
    s.fit_x_min = get_number(t, "fit_x_min", "scan", s.fit_x_min);
    if (const toml::node* node = t.get("profiles")) {
        const auto* arr = node->as_array();
        if (!arr) throw ConfigError("scan.profiles", line_of(*node) + "expected an array of profile names");
        s.profiles.clear();
        for (std::size_t i = 0; i < arr->size(); ++i) {
            const std::string field = "scan.profiles[" + std::to_string(i) + "]";
            auto name = arr->get(i)->value_exact<std::string>();
            if (!name) throw ConfigError(field, line_of(*arr->get(i)) + "expected a string");
            try {
                (void)parse_profile_kind(*name);
            } catch (const ValidationError& e) {
                throw ConfigError(field, line_of(*arr->get(i)) + e.what());
            }
            s.profiles.push_back(*name);
        }
    }
    return s;
}

toml::table parse_toml(std::string_view text, std::string_view source) {
    try {
        return toml::parse(text, source);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << "line " << e.source().begin.line << ", column " << e.source().begin.column << ": "
            << e.description();
        throw ConfigError(std::string(source), msg.str());
    }
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, std::string_view source, const fs::path& base_dir) {
    const toml::table root = parse_toml(text, source);
    check_keys(root, "", {"command", "out", "format", "system", "profile", "pointer", "scan", "dyson", "oracle"});
    ExperimentConfig cfg;
    cfg.command = get_string(root, "command", "", "");
    cfg.out = get_string(root, "out", "", "");
    cfg.format = get_string(root, "format", "", "");
    if (!cfg.format.empty() && cfg.format != "csv" && cfg.format != "json" && cfg.format != "text")
        throw ConfigError("format", line_of(*root.get("format")) + "expected csv, json or text");
    if (const auto* t = get_table(root, "system")) cfg.system = parse_system(*t, "system");
    if (const auto* t = get_table(root, "profile")) cfg.profile = parse_profile(*t, "profile", base_dir);
    if (const auto* t = get_table(root, "pointer")) cfg.pointer = parse_pointer(*t);
    if (const auto* t = get_table(root, "scan")) cfg.scan = parse_scan(*t);
    if (const auto* t = get_table(root, "dyson")) {
        check_keys(*t, "dyson", {"max_order", "a", "nodes"});
        cfg.dyson.max_order = get_int(*t, "max_order", "dyson", cfg.dyson.max_order);
        cfg.dyson.a = get_number(*t, "a", "dyson", cfg.dyson.a);
        cfg.dyson.nodes = get_int(*t, "nodes", "dyson", cfg.dyson.nodes);
    }
    if (const auto* t = get_table(root, "oracle")) {
        check_keys(*t, "oracle", {"a", "steps", "tolerance"});
        cfg.oracle.a = get_number(*t, "a", "oracle", cfg.oracle.a);
        cfg.oracle.steps = get_int(*t, "steps", "oracle", cfg.oracle.steps);
        cfg.oracle.tolerance = get_number(*t, "tolerance", "oracle", cfg.oracle.tolerance);
    }
    return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
    return parse_config(read_text(path), path.string(), path.parent_path());
}

SystemConfig load_system_file(const fs::path& path) {
    const toml::table root = parse_toml(read_text(path), path.string());
    if (const auto* t = get_table(root, "system")) return parse_system(*t, "system");
    return parse_system(root, "");
}

ProfileConfig load_profile_file(const fs::path& path) {
    if (path.extension() == ".csv") {
        ProfileConfig p;
        p.kind = "sampled";
        p.csv = path;
        return p;
    }
    const toml::table root = parse_toml(read_text(path), path.string());
    if (const auto* t = get_table(root, "profile")) return parse_profile(*t, "profile", path.parent_path());
    return parse_profile(root, "", path.parent_path());
}

std::pair<std::vector<double>, std::vector<double>> read_profile_csv(const fs::path& path) {
    std::istringstream in(read_text(path));
    std::vector<double> times;
    std::vector<double> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const auto comma = line.find(',');
        const std::string field = path.string() + ":" + std::to_string(lineno);
        if (comma == std::string::npos) throw ConfigError(field, "expected two comma-separated columns");
        try {
            std::size_t used = 0;
            const std::string a = line.substr(0, comma);
            const std::string b = line.substr(comma + 1);
            const double t = std::stod(a, &used);
            if (a.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("trailing text");
            const double v = std::stod(b, &used);
            if (b.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("trailing text");
            times.push_back(t);
            values.push_back(v);
        } catch (const std::logic_error&) {
            if (times.empty() && lineno == 1) continue;  // header
            throw ConfigError(field, "expected numeric time,value");
        }
    }
    if (times.size() < 2) throw ConfigError(path.string(), "sampled profile needs at least two samples");
    return {std::move(times), std::move(values)};
}

SystemModel make_system(const SystemConfig& config) {
    try {
        return {config.energies, config.observable, config.initial_level};
    } catch (const ValidationError& e) {
        const std::string what = e.what();
        std::string field = "system";
        if (what.find("observable") != std::string::npos) field = "system.observable";
        else if (what.find("initial level") != std::string::npos) field = "system.initial_level";
        else if (what.find("energ") != std::string::npos) field = "system.energies";
        throw ConfigError(field, what);
    }
}

CouplingProfile make_profile(const ProfileConfig& config) {
    try {
        CouplingProfile profile = CouplingProfile::boxcar(1.0);
        switch (parse_profile_kind(config.kind)) {
            case ProfileKind::Boxcar: profile = CouplingProfile::boxcar(config.duration); break;
            case ProfileKind::Trapezoid:
                profile = CouplingProfile::trapezoid(config.duration, config.turn_on_fraction);
                break;
            case ProfileKind::Triangle: profile = CouplingProfile::triangle(config.duration); break;
            case ProfileKind::RaisedCosine: profile = CouplingProfile::raised_cosine(config.duration); break;
            case ProfileKind::Sampled: {
                auto [t, v] = read_profile_csv(config.csv);
                profile = CouplingProfile::sampled(std::move(t), std::move(v));
                break;
            }
        }
        return config.area == 1.0 ? profile : profile.scaled(config.area);
    } catch (const ValidationError& e) {
        throw ConfigError("profile", e.what());
    }
}

PointerModel make_pointer(const PointerConfig& config) {
    try {
        return build_pointer(config.x0, config.sigma_x, config.grid_size, config.grid_span, config.apparatus);
    } catch (const ValidationError& e) {
        throw ConfigError("pointer", e.what());
    }
}

}  // namespace protmeas
