#include "protmeas/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "protmeas/config.hpp"
#include "protmeas/errors.hpp"
#include "protmeas/exact_oracle.hpp"
#include "protmeas/perturbation.hpp"
#include "protmeas/report_io.hpp"
#include "protmeas/scaling.hpp"

namespace protmeas::cli {

namespace {

namespace fs = std::filesystem;
using io::Json;

constexpr const char* kCommands[] = {"ft", "scan", "table1", "dyson", "oracle", "pointer", "identity"};

struct Options {
    std::string config;
    std::string out;
    std::string format;

    std::string system_file;
    int level = -1;
    std::string profile;
    double duration = 0.0;
    double turn_on = 0.0;
    double area = 0.0;
    std::vector<std::string> profiles;

    std::vector<double> omegas;
    double x_lo = 0.0;
    double x_hi = 0.0;
    int points = 0;
    double fit_x_min = 0.0;
    int m = -1;

    int order = 0;
    double a = 0.0;
    int nodes = 0;

    int grid = 0;
    int steps = 0;
    double span = 0.0;
    double sigma_x = 0.0;
    double x0 = 0.0;
    double tol = 0.0;
    double mass = 0.0;
};

struct Artifact {
    std::string name;
    io::Table table;
    Json summary = Json::object();
};

// Which options were given on the command line, by long name.
struct Given {
    const CLI::App* sub = nullptr;
    bool operator()(const std::string& name) const {
        if (!sub) return false;
        const CLI::Option* opt = sub->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    }
};

std::string render(const Artifact& art, const std::string& format) {
    if (format == "csv") return io::to_csv(art.table);
    if (format == "json") {
        Json doc = Json::object();
        doc["schema_version"] = 1;
        doc["command"] = art.name;
        for (auto it = art.summary.begin(); it != art.summary.end(); ++it) doc[it.key()] = it.value();
        doc["rows"] = io::to_json_rows(art.table);
        return io::dump(doc);
    }
    std::string text;
    for (auto it = art.summary.begin(); it != art.summary.end(); ++it) {
        const Json& v = it.value();
        std::string value;
        if (v.is_number_float()) value = io::format_number(v.get<double>());
        else if (v.is_string()) value = v.get<std::string>();
        else value = io::rounded(v).dump();
        text += it.key() + ": " + value + "\n";
    }
    if (!text.empty()) text += "\n";
    return text + io::to_text(art.table);
}

void emit(const Artifact& art, const std::string& format, const std::string& out_dir, std::ostream& out) {
    if (out_dir.empty()) {
        out << render(art, format);
        return;
    }
    const fs::path dir(out_dir);
    const fs::path json_path = dir / (art.name + ".json");
    io::write_file(json_path, render(art, "json"));
    out << "wrote " << json_path.string() << "\n";
    if (format != "json") {
        const fs::path path = dir / (art.name + (format == "csv" ? ".csv" : ".txt"));
        io::write_file(path, render(art, format));
        out << "wrote " << path.string() << "\n";
    }
}

SystemModel resolve_system(const Options& o, const Given& given, const ExperimentConfig& cfg, std::ostream& err) {
    std::optional<SystemConfig> sc = cfg.system;
    if (!o.system_file.empty()) sc = load_system_file(o.system_file);
    if (!sc) throw ConfigError("system", "no system given (use --system <file> or a [system] table)");
    if (given("--level")) sc->initial_level = o.level;
    SystemModel sys = make_system(*sc);
    for (const auto& w : sys.warnings()) err << "warning: " << w << "\n";
    return sys;
}

ProfileConfig resolve_profile_config(const Options& o, const Given& given, const ExperimentConfig& cfg) {
    ProfileConfig pc = cfg.profile;
    if (!o.profile.empty()) {
        const fs::path candidate(o.profile);
        if (candidate.has_extension() && (candidate.extension() == ".toml" || candidate.extension() == ".csv")) {
            pc = load_profile_file(candidate);
        } else {
            try {
                (void)parse_profile_kind(o.profile);
            } catch (const ValidationError& e) {
                throw ConfigError("--profile", e.what());
            }
            pc.kind = o.profile;
        }
    }
    if (given("--T")) pc.duration = o.duration;
    if (given("--turn-on-fraction")) pc.turn_on_fraction = o.turn_on;
    if (given("--area")) pc.area = o.area;
    return pc;
}

std::vector<std::string> resolve_profiles(const Options& o, const Given& given, const ExperimentConfig& cfg) {
    if (!given("--profiles")) return cfg.scan.profiles;
    for (const auto& name : o.profiles) {
        try {
            (void)parse_profile_kind(name);
        } catch (const ValidationError& e) {
            throw ConfigError("--profiles", e.what());
        }
    }
    return o.profiles;
}

double transform_or_nan(const CouplingProfile& p, double omega) {
    return p.has_analytic_transform() ? p.fourier_transform(omega) : std::numeric_limits<double>::quiet_NaN();
}

Artifact cmd_ft(const Options& o, const Given& given, const ExperimentConfig& cfg) {
    const CouplingProfile profile = make_profile(resolve_profile_config(o, given, cfg));
    const double T = profile.duration();
    std::vector<double> omegas = o.omegas;
    if (omegas.empty()) {
        const double lo = given("--x-min") ? o.x_lo : 0.0;
        const double hi = given("--x-max") ? o.x_hi : 100.0;
        const int points = given("--points") ? o.points : 101;
        if (points < 2 || !(hi > lo)) throw ValidationError("ft needs --points >= 2 and --x-max > --x-min");
        for (int i = 0; i < points; ++i) omegas.push_back((lo + (hi - lo) * i / (points - 1)) / T);
    }
    Artifact art;
    art.name = "ft";
    art.table.columns = {"omega", "x", "analytic", "numeric", "difference"};
    double worst = 0.0;
    for (double w : omegas) {
        const double analytic = transform_or_nan(profile, w);
        const double numeric = profile.numeric_fourier_transform(w);
        const double diff = std::isnan(analytic) ? analytic : std::abs(analytic - numeric);
        if (!std::isnan(diff)) worst = std::max(worst, diff);
        art.table.add_row({w, w * T, analytic, numeric, diff});
    }
    art.summary["profile"] = profile.name();
    art.summary["T"] = T;
    art.summary["area"] = profile.area();
    art.summary["even"] = profile.is_even();
    if (profile.has_analytic_transform()) art.summary["max_difference"] = worst;
    else art.summary["max_difference"] = nullptr;
    return art;
}

Artifact cmd_scan(const Options& o, const Given& given, const ExperimentConfig& cfg, std::ostream& err) {
    const auto names = resolve_profiles(o, given, cfg);
    if (names.empty()) throw ValidationError("scan needs at least one profile");
    double weight = 1.0;
    if (!o.system_file.empty() || cfg.system) {
        const SystemModel sys = resolve_system(o, given, cfg, err);
        const int n = sys.initial_level();
        int m = given("--m") ? o.m : (n == 0 ? 1 : 0);
        if (m == n || m < 0 || m >= sys.dimension()) throw ConfigError("--m", "needs a level different from n");
        weight = std::norm(sys.element(m, n));
    }
    const double lo = given("--x-min") ? o.x_lo : cfg.scan.x_lo;
    const double hi = given("--x-max") ? o.x_hi : cfg.scan.x_hi;
    const int points = given("--points") ? o.points : cfg.scan.points;
    const double fit_x_min = given("--fit-xmin") ? o.fit_x_min : cfg.scan.fit_x_min;
    const double turn_on = given("--turn-on-fraction") ? o.turn_on : cfg.profile.turn_on_fraction;

    Artifact art;
    art.name = "scan";
    art.table.columns = {"profile", "x", "y", "antinode"};
    Json fits = Json::array();
    for (const auto& name : names) {
        const ProfileKind kind = parse_profile_kind(name);
        const auto scan = probability_scan(weight, kind, lo, hi, points, turn_on);
        std::vector<double> nodes;
        for (const auto& s : scan.envelope) nodes.push_back(s.x);
        for (const auto& s : scan.samples) {
            const bool antinode = std::binary_search(nodes.begin(), nodes.end(), s.x);
            art.table.add_row({std::string(to_string(kind)), s.x, s.y, static_cast<long long>(antinode)});
        }
        Json fit = Json::object();
        fit["profile"] = std::string(to_string(kind));
        fit["fwhm"] = scan.fwhm;
        try {
            const auto f = fit_envelope_exponent(scan, fit_x_min);
            fit["beta"] = f.beta;
            fit["beta_stderr"] = f.stderr_beta;
            fit["antinodes"] = f.samples;
        } catch (const std::exception& e) {
            fit["error"] = e.what();
        }
        fits.push_back(std::move(fit));
    }
    art.summary["coupling_weight"] = weight;
    art.summary["fit_x_min"] = fit_x_min;
    art.summary["fits"] = std::move(fits);
    return art;
}

Artifact cmd_table1(const Options& o, const Given& given, const ExperimentConfig& cfg) {
    const auto names = resolve_profiles(o, given, cfg);
    std::vector<ProfileKind> kinds;
    for (const auto& name : names) kinds.push_back(parse_profile_kind(name));
    const double x_min = given("--xmin") ? o.fit_x_min : cfg.scan.fit_x_min;
    const double x_max = given("--x-max") ? o.x_hi : cfg.scan.x_hi;
    const int points = given("--points") ? o.points : cfg.scan.points;
    const auto report = table1_report(x_min, kinds, x_max, points);

    Artifact art;
    art.name = "table1";
    art.table.columns = {"profile",  "beta",          "beta_stderr",    "expected_beta", "beta_tolerance",
                         "beta_pass", "fwhm",         "expected_fwhm",  "fwhm_tolerance", "fwhm_pass",
                         "flagged",  "error"};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& row : report.rows) {
        art.table.add_row({std::string(to_string(row.kind)), row.fit ? row.fit->beta : nan,
                           row.fit ? row.fit->stderr_beta : nan, row.expected_beta, row.beta_tolerance,
                           std::string(row.beta_pass ? "pass" : "fail"), row.fwhm.value_or(nan), row.expected_fwhm,
                           row.fwhm_tolerance, std::string(row.fwhm_pass ? "pass" : "fail"),
                           std::string(row.flagged ? "yes" : "no"), row.error});
    }
    art.summary["x_min"] = report.x_min;
    art.summary["x_max"] = report.x_max;
    art.summary["all_pass"] = report.pass();
    return art;
}

Artifact cmd_dyson(const Options& o, const Given& given, const ExperimentConfig& cfg, std::ostream& err) {
    const SystemModel sys = resolve_system(o, given, cfg, err);
    const CouplingProfile profile = make_profile(resolve_profile_config(o, given, cfg));
    DysonRequest req{sys, profile, given("--order") ? o.order : cfg.dyson.max_order,
                     given("--a") ? o.a : cfg.dyson.a, given("--nodes") ? o.nodes : cfg.dyson.nodes};
    const auto table = dyson_amplitudes(req);

    Artifact art;
    art.name = "dyson";
    art.table.columns = {"order", "m", "re", "im"};
    for (std::size_t l = 0; l < table.orders.size(); ++l)
        for (Eigen::Index m = 0; m < table.orders[l].size(); ++m)
            art.table.add_row({static_cast<long long>(l), static_cast<long long>(m), table.orders[l](m).real(),
                               table.orders[l](m).imag()});
    Json total = Json::array();
    for (Eigen::Index m = 0; m < table.total.size(); ++m)
        total.push_back({{"m", m}, {"re", table.total(m).real()}, {"im", table.total(m).imag()}});
    art.summary["profile"] = table.profile_name;
    art.summary["T"] = table.duration;
    art.summary["initial_level"] = table.initial_level;
    art.summary["max_order"] = table.max_order;
    art.summary["pointer_momentum"] = table.pointer_momentum;
    art.summary["truncation_bound"] = table.truncation_bound;
    art.summary["error_estimate"] = table.error_estimate;
    art.summary["norm"] = table.total.squaredNorm();
    art.summary["protection_ratio"] = sys.protection_ratio(profile.duration());
    art.summary["total"] = std::move(total);
    return art;
}

PointerConfig resolve_pointer(const Options& o, const Given& given, const ExperimentConfig& cfg) {
    PointerConfig pc = cfg.pointer;
    if (given("--grid")) pc.grid_size = o.grid;
    if (given("--span")) pc.grid_span = o.span;
    if (given("--sigma-x")) pc.sigma_x = o.sigma_x;
    if (given("--x0")) pc.x0 = o.x0;
    if (given("--mass")) pc.apparatus = FreeApparatus{o.mass};
    return pc;
}

OracleOptions resolve_oracle(const Options& o, const Given& given, const ExperimentConfig& cfg) {
    OracleOptions opts;
    opts.initial_steps = given("--steps") ? o.steps : cfg.oracle.steps;
    opts.tolerance = given("--tol") ? o.tol : cfg.oracle.tolerance;
    return opts;
}

Artifact cmd_oracle(const Options& o, const Given& given, const ExperimentConfig& cfg, std::ostream& err) {
    const SystemModel sys = resolve_system(o, given, cfg, err);
    const CouplingProfile profile = make_profile(resolve_profile_config(o, given, cfg));
    const PointerModel pointer = make_pointer(resolve_pointer(o, given, cfg));
    const auto result = full_measurement_run(sys, profile, pointer, resolve_oracle(o, given, cfg));

    Artifact art;
    art.name = "oracle";
    const int d = sys.dimension();
    art.table.columns = {"a"};
    for (int m = 0; m < d; ++m) art.table.columns.push_back("re_" + std::to_string(m));
    for (int m = 0; m < d; ++m) art.table.columns.push_back("im_" + std::to_string(m));
    art.table.columns.push_back("survival");
    for (std::size_t i = 0; i < result.momenta.size(); ++i) {
        std::vector<io::Cell> row{result.momenta[i]};
        for (int m = 0; m < d; ++m) row.emplace_back(result.amplitudes[i](m).real());
        for (int m = 0; m < d; ++m) row.emplace_back(result.amplitudes[i](m).imag());
        row.emplace_back(std::norm(result.amplitudes[i](sys.initial_level())));
        art.table.add_row(std::move(row));
    }
    art.summary["profile"] = profile.name();
    art.summary["T"] = profile.duration();
    art.summary["pointer_shift"] = result.pointer_shift;
    art.summary["expected_shift"] = profile.area() * sys.expectation();
    art.summary["density_shift"] = result.density_shift;
    art.summary["distortion"] = result.distortion;
    art.summary["disturbance"] = result.disturbance;
    art.summary["purity"] = result.purity;
    art.summary["pointer_variance"] = result.pointer_variance;
    art.summary["convergence"] = result.convergence;
    art.summary["steps"] = result.max_steps;
    return art;
}

Artifact cmd_pointer(const Options& o, const Given& given, const ExperimentConfig& cfg, std::ostream& err) {
    const SystemModel sys = resolve_system(o, given, cfg, err);
    const ProfileConfig base = resolve_profile_config(o, given, cfg);
    std::vector<std::string> names = given("--profiles") ? resolve_profiles(o, given, cfg)
                                                         : std::vector<std::string>{"boxcar", "triangle", "raised-cosine"};
    if (names.empty()) throw ValidationError("pointer needs at least one profile");
    const PointerModel pointer = make_pointer(resolve_pointer(o, given, cfg));
    const OracleOptions opts = resolve_oracle(o, given, cfg);
    double a_max = 0.0;
    for (double a : pointer.momenta) a_max = std::max(a_max, std::abs(a));

    Artifact art;
    art.name = "pointer";
    art.table.columns = {"profile",       "pointer_shift", "expected_shift", "deviation", "band",
                         "within_band",   "density_shift", "distortion",     "disturbance", "purity"};
    std::vector<double> shifts;
    double widest = 0.0;
    bool all_within = true;
    for (const auto& name : names) {
        ProfileConfig pc = base;
        pc.kind = name;
        const CouplingProfile profile = make_profile(pc);
        const auto result = full_measurement_run(sys, profile, pointer, opts);
        const double expected = profile.area() * sys.expectation();
        const double band = shift_correction_band(sys, profile, a_max);
        const double deviation = result.pointer_shift - expected;
        const bool within = std::abs(deviation) <= band;
        all_within = all_within && within;
        widest = std::max(widest, band);
        shifts.push_back(result.pointer_shift);
        art.table.add_row({profile.name(), result.pointer_shift, expected, deviation, band,
                           std::string(within ? "yes" : "no"), result.density_shift, result.distortion,
                           result.disturbance, result.purity});
    }
    const auto [lo, hi] = std::minmax_element(shifts.begin(), shifts.end());
    art.summary["T"] = base.duration;
    art.summary["grid_size"] = pointer.size();
    art.summary["band"] = widest;
    art.summary["max_pairwise_difference"] = *hi - *lo;
    art.summary["shifts_agree"] = (*hi - *lo) <= widest;
    art.summary["all_within_band"] = all_within;
    return art;
}

Artifact cmd_identity(const Options& o, const Given& given, const ExperimentConfig& cfg) {
    std::vector<std::string> names = given("--profiles")
                                         ? resolve_profiles(o, given, cfg)
                                         : std::vector<std::string>{"boxcar", "trapezoid", "triangle", "raised-cosine"};
    if (names.empty()) throw ValidationError("identity needs at least one profile");
    const ProfileConfig base = resolve_profile_config(o, given, cfg);
    const int max_order = given("--order") ? o.order : 6;
    const int nodes = given("--nodes") ? o.nodes : kMinDysonNodes;
    if (max_order < 1 || max_order > 8) throw ValidationError("identity --order must lie in [1, 8]");

    Artifact art;
    art.name = "identity";
    art.table.columns = {"profile", "ell", "value", "expected", "abs_error"};
    double worst = 0.0;
    for (const auto& name : names) {
        ProfileConfig pc = base;
        pc.kind = name;
        const CouplingProfile profile = make_profile(pc);
        double expected = 1.0;
        for (int ell = 1; ell <= max_order; ++ell) {
            expected *= profile.area() / ell;
            const double value = nested_integral_identity(profile, ell, nodes);
            const double error = std::abs(value - expected);
            worst = std::max(worst, error);
            art.table.add_row({profile.name(), static_cast<long long>(ell), value, expected, error});
        }
    }
    art.summary["T"] = base.duration;
    art.summary["max_abs_error"] = worst;
    return art;
}

void add_system_flags(CLI::App* sub, Options& o) {
    sub->add_option("--system", o.system_file, "TOML file with the system (energies, observable, initial_level)");
    sub->add_option("--level", o.level, "Initial level n (overrides the file)");
}

void add_profile_flags(CLI::App* sub, Options& o) {
    sub->add_option("--profile", o.profile, "Profile kind, or a .toml/.csv profile file");
    sub->add_option("--T", o.duration, "Interaction duration T");
    sub->add_option("--turn-on-fraction", o.turn_on, "Trapezoid turn-on fraction (0, 1/2]");
    sub->add_option("--area", o.area, "Total coupling area G (1 = normalized)");
}

void add_pointer_flags(CLI::App* sub, Options& o) {
    sub->add_option("--grid", o.grid, "Pointer momentum grid size");
    sub->add_option("--span", o.span, "Full width of the momentum grid");
    sub->add_option("--sigma-x", o.sigma_x, "Position width of the pointer packet");
    sub->add_option("--x0", o.x0, "Initial pointer position");
    sub->add_option("--mass", o.mass, "Free-pointer mass (default: static pointer)");
    sub->add_option("--steps", o.steps, "Initial propagation step count (0 = automatic)");
    sub->add_option("--tol", o.tol, "Step-doubling convergence tolerance");
}

void add_profiles_flag(CLI::App* sub, Options& o) {
    sub->add_option("--profiles", o.profiles, "Comma-separated profile kinds")->delimiter(',');
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Protective-measurement perturbation theory and exact-propagation oracle", "protmeas"};
    app.add_option("--config", o.config, "TOML experiment configuration");
    app.add_option("--out", o.out, "Output directory (default: print to stdout)");
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json", "text"}));
    app.require_subcommand(0, 1);

    auto* ft = app.add_subcommand("ft", "Fourier transform of a coupling profile, analytic and by quadrature");
    add_profile_flags(ft, o);
    ft->add_option("--omega", o.omegas, "Angular frequencies (comma-separated)")->delimiter(',');
    ft->add_option("--x-min", o.x_lo, "Smallest omega*T when sampling a range");
    ft->add_option("--x-max", o.x_hi, "Largest omega*T when sampling a range");
    ft->add_option("--points", o.points, "Number of omega*T samples");

    auto* scan = app.add_subcommand("scan", "First-order transition probability against omega*T");
    add_system_flags(scan, o);
    add_profiles_flag(scan, o);
    scan->add_option("--m", o.m, "Final level m (with --system)");
    scan->add_option("--x-min", o.x_lo, "Scan start");
    scan->add_option("--x-max", o.x_hi, "Scan end");
    scan->add_option("--points", o.points, "Uniform samples");
    scan->add_option("--fit-xmin", o.fit_x_min, "Smallest antinode used in the exponent fit");
    scan->add_option("--turn-on-fraction", o.turn_on, "Trapezoid turn-on fraction");

    auto* table1 = app.add_subcommand("table1", "Envelope exponents and FWHM against the reference table");
    add_profiles_flag(table1, o);
    table1->add_option("--xmin", o.fit_x_min, "Smallest antinode used in the fits");
    table1->add_option("--x-max", o.x_hi, "Largest omega*T scanned");
    table1->add_option("--points", o.points, "Uniform samples per scan");

    auto* dyson = app.add_subcommand("dyson", "Order-resolved Dyson amplitudes");
    add_system_flags(dyson, o);
    add_profile_flags(dyson, o);
    dyson->add_option("--order", o.order, "Maximum order L (<= 6)");
    dyson->add_option("--a", o.a, "Pointer momentum a");
    dyson->add_option("--nodes", o.nodes, "Chebyshev nodes per panel (>= 32)");

    auto* oracle = app.add_subcommand("oracle", "Exact propagation over the pointer grid");
    add_system_flags(oracle, o);
    add_profile_flags(oracle, o);
    add_pointer_flags(oracle, o);

    auto* pointer = app.add_subcommand("pointer", "Pointer shifts for several profiles with the correction band");
    add_system_flags(pointer, o);
    add_profile_flags(pointer, o);
    add_profiles_flag(pointer, o);
    add_pointer_flags(pointer, o);

    auto* identity = app.add_subcommand("identity", "Nested time-ordered integrals against G^l / l!");
    add_profile_flags(identity, o);
    add_profiles_flag(identity, o);
    identity->add_option("--order", o.order, "Largest order (<= 8)");
    identity->add_option("--nodes", o.nodes, "Chebyshev nodes per panel");

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        ExperimentConfig cfg;
        if (!o.config.empty()) cfg = load_config(o.config);

        std::string command;
        const CLI::App* chosen = nullptr;
        for (const auto* sub : app.get_subcommands()) {
            command = sub->get_name();
            chosen = sub;
        }
        if (command.empty()) command = cfg.command;
        if (command.empty()) {
            err << "error: no subcommand given (one of ft, scan, table1, dyson, oracle, pointer, identity)\n";
            return kUsage;
        }
        if (std::find(std::begin(kCommands), std::end(kCommands), command) == std::end(kCommands)) {
            err << "error: unknown subcommand '" << command << "'\n";
            return kUsage;
        }
        if (!chosen) chosen = app.get_subcommand(command);
        const Given given{chosen};
        const std::string format = !o.format.empty() ? o.format : (!cfg.format.empty() ? cfg.format : "text");
        const std::string out_dir = !o.out.empty() ? o.out : cfg.out;

        Artifact art;
        if (command == "ft") art = cmd_ft(o, given, cfg);
        else if (command == "scan") art = cmd_scan(o, given, cfg, err);
        else if (command == "table1") art = cmd_table1(o, given, cfg);
        else if (command == "dyson") art = cmd_dyson(o, given, cfg, err);
        else if (command == "oracle") art = cmd_oracle(o, given, cfg, err);
        else if (command == "pointer") art = cmd_pointer(o, given, cfg, err);
        else art = cmd_identity(o, given, cfg);

        emit(art, format, out_dir, out);
        if (command == "table1" && !out_dir.empty() && format != "text")
            io::write_file(fs::path(out_dir) / "table1.txt", render(art, "text"));
        return kOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kUsage;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kIo;
    } catch (const AccuracyError& e) {
        err << "accuracy error: " << e.what() << " (estimate " << e.estimate() << ")\n";
        return kRuntime;
    } catch (const ValidationError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kUsage;
    } catch (const CostCapError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kUsage;
    } catch (const UnsupportedProfileError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kRuntime;
    }
}

}  // namespace protmeas::cli
