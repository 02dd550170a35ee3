// Command-line front end: every library operation behind reproducible
// subcommands. Configuration comes from `key = value` files (hand-rolled
// reader, see README) with command-line flags taking precedence; each run
// echoes its fully resolved configuration into the output sidecar.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nlcalc/antiderivative.hpp"
#include "nlcalc/convergence_lab.hpp"
#include "nlcalc/derivative.hpp"
#include "nlcalc/grid_function.hpp"
#include "nlcalc/kernels.hpp"
#include "nlcalc/spectral.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

using nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string normalize_key(std::string key) {
    for (char& c : key)
        if (c == '_') c = '-';
    return key;
}

/// Flat key = value file: '#' starts a comment, blank lines are skipped,
/// values run to the end of line. Keys use the flag names without dashes.
std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::map<std::string, std::string> out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string str) {
            const auto from = str.find_first_not_of(" \t\r");
            const auto to = str.find_last_not_of(" \t\r");
            return from == std::string::npos ? std::string()
                                             : str.substr(from, to - from + 1);
        };
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(number) +
                                     ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::runtime_error(path + ":" + std::to_string(number) +
                                     ": expected key = value");
        out[normalize_key(key)] = value;
    }
    return out;
}

/// Resolved settings for one run: defaults, then the config file, then
/// command-line flags, later layers winning.
class Settings {
public:
    void set_default(const std::string& key, const std::string& value) {
        layers_[0][normalize_key(key)] = value;
    }
    void load_file(const std::string& path) {
        for (const auto& [k, v] : read_config_file(path)) layers_[1][k] = v;
    }
    void set_cli(const std::string& key, const std::string& value) {
        layers_[2][normalize_key(key)] = value;
    }

    bool has(const std::string& key) const {
        for (int i = 2; i >= 0; --i)
            if (layers_[i].count(normalize_key(key))) return true;
        return false;
    }
    std::string str(const std::string& key) const {
        for (int i = 2; i >= 0; --i) {
            auto it = layers_[i].find(normalize_key(key));
            if (it != layers_[i].end()) return it->second;
        }
        throw std::runtime_error("missing required setting '" + key + "'");
    }
    double num(const std::string& key) const { return std::stod(str(key)); }
    long integer(const std::string& key) const { return std::stol(str(key)); }
    bool flag(const std::string& key) const {
        const std::string v = str(key);
        return v == "1" || v == "true" || v == "yes" || v == "on";
    }
    std::vector<double> num_list(const std::string& key) const {
        std::vector<double> out;
        std::stringstream ss(str(key));
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) out.push_back(std::stod(item));
        return out;
    }
    std::vector<std::string> str_list(const std::string& key) const {
        std::vector<std::string> out;
        std::stringstream ss(str(key));
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) out.push_back(item);
        return out;
    }
    std::pair<double, double> interval(const std::string& key) const {
        const std::vector<double> v = num_list(key);
        if (v.size() != 2 || !(v[0] < v[1]))
            throw std::runtime_error("setting '" + key + "' must be \"a,b\" with a < b");
        return {v[0], v[1]};
    }

    ordered_json echo() const {
        std::map<std::string, std::string> merged;
        for (const auto& layer : layers_)
            for (const auto& [k, v] : layer) merged[k] = v;
        ordered_json j = ordered_json::object();
        for (const auto& [k, v] : merged) j[k] = v;
        return j;
    }

private:
    std::map<std::string, std::string> layers_[3];
};

/// Binds `--<key>` to the CLI layer of the settings.
void bind(CLI::App* cmd, Settings& s, const std::string& key, const std::string& help,
          bool repeatable = false) {
    const CLI::callback_t callback = [&s, key](const CLI::results_t& values) {
        std::string joined;
        for (const std::string& v : values) {
            if (!joined.empty()) joined += ',';
            joined += v;
        }
        s.set_cli(key, joined);
        return true;
    };
    auto* opt = cmd->add_option("--" + key, callback, help);
    opt->type_name("TEXT");
    if (repeatable) opt->take_all();
}

void bind_kernel_options(CLI::App* cmd, Settings& s) {
    bind(cmd, s, "kernel", "catalogue kernel: indicator|exponential|sine|power");
    bind(cmd, s, "k-alpha", "power-kernel exponent, in (-2,0) or (0,inf)");
    bind(cmd, s, "table", "CSV file (s,value) with the positive branch of a custom kernel");
    bind(cmd, s, "support", "support radius of a tabulated kernel");
    bind(cmd, s, "gauge-case", "tabulated kernel gauge: finite-limit|singular");
    bind(cmd, s, "gauge-exponent", "tabulated kernel gauge exponent");
    bind(cmd, s, "gauge-radius", "tabulated kernel gauge radius");
    bind(cmd, s, "coeff-upper", "tabulated kernel upper gauge coefficient");
    bind(cmd, s, "coeff-lower", "tabulated kernel lower gauge coefficient");
}

nlcalc::KernelProfile kernel_from(const Settings& s) {
    if (s.has("table")) {
        std::ifstream in(s.str("table"));
        if (!in) throw std::runtime_error("cannot open kernel table " + s.str("table"));
        std::vector<std::pair<double, double>> samples;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line[0] == 's') continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos)
                throw std::runtime_error("kernel table rows must be s,value");
            samples.emplace_back(std::stod(line.substr(0, comma)),
                                 std::stod(line.substr(comma + 1)));
        }
        std::optional<nlcalc::Flatness> flatness;
        if (s.has("gauge-exponent")) {
            nlcalc::Flatness f;
            f.kind = s.has("gauge-case") && s.str("gauge-case") == "singular"
                         ? nlcalc::FlatnessCase::singular
                         : nlcalc::FlatnessCase::finite_limit;
            f.exponent = s.num("gauge-exponent");
            f.gauge_radius = s.has("gauge-radius") ? s.num("gauge-radius") : 1.0;
            f.coeff_upper = s.has("coeff-upper") ? s.num("coeff-upper") : 1.0;
            f.coeff_lower = s.has("coeff-lower") ? s.num("coeff-lower") : 1.0;
            flatness = f;
        }
        return nlcalc::tabulated_kernel("table:" + s.str("table"), std::move(samples),
                                        s.num("support"), flatness);
    }
    std::map<std::string, double> params;
    if (s.has("k-alpha")) params["k_alpha"] = s.num("k-alpha");
    return nlcalc::make_kernel(s.str("kernel"), params);
}

struct NamedFunction {
    std::function<double(double)> fn;
    std::vector<double> kinks;
};

NamedFunction builtin_function(const std::string& name) {
    if (name == "linear") return {[](double t) { return t; }, {}};
    if (name == "sqrt-abs") return {[](double t) { return std::sqrt(std::fabs(t)); }, {0.0}};
    if (name == "gaussian") return {[](double t) { return std::exp(-t * t); }, {}};
    if (name == "runge") return {[](double t) { return 1.0 / (1.0 + t * t); }, {}};
    if (name == "zero") return {[](double) { return 0.0; }, {}};
    throw std::runtime_error("unknown builtin function '" + name +
                             "' (linear|sqrt-abs|gaussian|runge|zero)");
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output " + path);
    out << text << "\n";
}

ordered_json sidecar_header(const std::string& command, const Settings& s) {
    ordered_json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["config"] = s.echo();
    return j;
}

// ---------------------------------------------------------------------------

int run_check_kernel(Settings& s) {
    const nlcalc::KernelProfile kernel = kernel_from(s);
    nlcalc::CheckConfig cfg;
    cfg.grid_samples = static_cast<int>(s.integer("samples"));
    cfg.tolerance = s.num("tolerance");
    const nlcalc::AdmissibilityReport report = nlcalc::check_admissibility(kernel, cfg);

    const std::map<std::string, bool> flags = {
        {"antisymmetry", report.antisymmetry_ok}, {"dipole", report.dipole_ok},
        {"analytic", report.analytic_class_ok},   {"positivity", report.positivity_ok},
        {"flatness", report.flatness_ok},
    };
    bool pass = true;
    for (const std::string& requirement : s.str_list("require")) {
        if (requirement == "all") {
            pass = pass && report.fully_admissible();
        } else if (flags.count(requirement)) {
            pass = pass && flags.at(requirement);
        } else {
            throw std::runtime_error("unknown requirement '" + requirement + "'");
        }
    }

    ordered_json j = sidecar_header("check-kernel", s);
    j["antisymmetry_ok"] = report.antisymmetry_ok;
    j["antisymmetry_violation"] = report.antisymmetry_violation;
    j["dipole_ok"] = report.dipole_ok;
    j["first_moment"] = report.first_moment;
    j["analytic_class_ok"] = report.analytic_class_ok;
    j["analytic_constant"] = report.analytic_constant;
    j["factorial_ratios"] = report.factorial_ratios;
    j["positivity_ok"] = report.positivity_ok;
    j["has_flatness"] = report.has_flatness;
    j["flatness_ok"] = report.flatness_ok;
    j["fully_admissible"] = report.fully_admissible();
    j["requirements_pass"] = pass;
    write_text(s.str("output"), j.dump(2));
    return pass ? 0 : 1;
}

int run_derive(Settings& s) {
    const nlcalc::KernelProfile kernel = kernel_from(s);
    const std::vector<double> epsilons = s.num_list("epsilon");
    if (epsilons.empty()) throw std::runtime_error("derive needs at least one --epsilon");

    if (s.has("annihilation")) {
        const int n = static_cast<int>(s.integer("annihilation"));
        ordered_json j = sidecar_header("derive", s);
        j["mode"] = n;
        j["residuals"] = ordered_json::array();
        for (double eps : epsilons) {
            const double r = nlcalc::annihilation_residual(nlcalc::scale(kernel, eps), n);
            j["residuals"].push_back({{"epsilon", eps}, {"residual", r}});
        }
        write_text(s.str("output"), j.dump(2));
        return 0;
    }

    std::vector<double> points;
    std::vector<std::vector<double>> columns;
    if (s.has("input")) {
        const nlcalc::GridFunction u = nlcalc::read_csv(s.str("input"));
        // restrict to points whose kernel window stays inside the data
        for (double eps : epsilons) {
            const nlcalc::ScaledKernel sk = nlcalc::scale(kernel, eps);
            if (points.empty()) {
                const double margin = sk.effective_radius() + 2.0 * u.spacing();
                for (std::size_t i = 0; i < u.size(); ++i) {
                    const double t = u.point(i);
                    if (t - margin >= u.min_point() && t + margin <= u.max_point())
                        points.push_back(t);
                }
                if (points.empty())
                    throw std::runtime_error(
                        "derive: no grid point keeps the kernel window inside the data");
            }
            columns.push_back(nlcalc::apply(sk, u, points));
        }
    } else {
        const NamedFunction u = builtin_function(s.str("function"));
        const auto [a, b] = s.interval("domain");
        const std::size_t n = static_cast<std::size_t>(s.integer("points"));
        points.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            points[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
        for (double eps : epsilons)
            columns.push_back(nlcalc::apply(nlcalc::scale(kernel, eps), u.fn, points, {},
                                            u.kinks));
    }

    std::ostringstream csv;
    csv << "t";
    for (double eps : epsilons) csv << ",eps=" << format_double(eps);
    for (std::size_t i = 0; i < points.size(); ++i) {
        csv << "\n" << format_double(points[i]);
        for (const auto& column : columns) csv << "," << format_double(column[i]);
    }
    write_text(s.str("output"), csv.str());
    if (s.str("output") != "-")
        write_text(s.str("output") + ".json", sidecar_header("derive", s).dump(2));
    return 0;
}

int run_antiderive(Settings& s) {
    const nlcalc::KernelProfile kernel = kernel_from(s);
    const std::vector<double> epsilons = s.num_list("epsilon");
    if (epsilons.size() != 1)
        throw std::runtime_error("antiderive needs exactly one --epsilon");
    const nlcalc::ScaledKernel scaled = nlcalc::scale(kernel, epsilons[0]);

    const nlcalc::GridFunction F = [&] {
        if (s.has("input")) return nlcalc::read_csv(s.str("input"));
        const auto [a, b] = s.interval("domain");
        return nlcalc::GridFunction::sample(a, b, static_cast<std::size_t>(s.integer("n")),
                                            builtin_function(s.str("function")).fn);
    }();

    nlcalc::SolverConfig cfg;
    cfg.null_threshold = s.num("tau");
    cfg.strict_boundary = s.flag("strict-boundary");
    cfg.compute_residual = s.flag("residual");
    const std::string policy = s.str("constant-policy");
    if (policy == "zero-mean") {
        cfg.policy = nlcalc::ConstantPolicy::zero_mean;
    } else if (policy.rfind("fixed:", 0) == 0) {
        cfg.policy = nlcalc::ConstantPolicy::fixed_value;
        cfg.fixed_constant = std::stod(policy.substr(6));
    } else {
        throw std::runtime_error("constant-policy must be zero-mean or fixed:<value>");
    }

    const nlcalc::AntiderivativeResult result = nlcalc::solve(scaled, F, cfg);
    const std::string out = s.str("output");
    if (out == "-") throw std::runtime_error("antiderive needs --output for its CSV");
    nlcalc::write_csv(result.particular, out);

    ordered_json j = sidecar_header("antiderive", s);
    j.update(ordered_json::parse(nlcalc::to_json(result, kernel.name(), epsilons[0], cfg)));
    write_text(out + ".json", j.dump(2));
    return 0;
}

int run_zeros(Settings& s) {
    const nlcalc::KernelProfile kernel = kernel_from(s);
    const nlcalc::ZeroSet zeros =
        nlcalc::find_zeros(kernel, s.num("window"), static_cast<int>(s.integer("resolution")));

    ordered_json j = sidecar_header("zeros", s);
    j.update(ordered_json::parse(nlcalc::to_json(zeros, kernel.name(), 1.0)));
    j.erase("epsilon");
    if (s.has("epsilon")) {
        j["scaled"] = ordered_json::array();
        for (double eps : s.num_list("epsilon")) {
            ordered_json entry;
            entry["epsilon"] = eps;
            entry["zeros"] = ordered_json::array();
            for (const nlcalc::Zero& z : zeros.zeros)
                entry["zeros"].push_back(
                    {{"xi", z.xi / eps}, {"multiplicity", z.multiplicity}});
            j["scaled"].push_back(entry);
        }
    }
    write_text(s.str("output"), j.dump(2));
    return 0;
}

int run_sweep(Settings& s) {
    const nlcalc::KernelProfile kernel = kernel_from(s);
    const std::vector<double> epsilons = s.num_list("epsilon");
    const std::string experiment = s.str("experiment");

    nlcalc::SweepReport report;
    if (experiment == "derivative") {
        const std::string fname = s.str("function");
        const NamedFunction u = builtin_function(fname);
        const auto [a, b] = s.interval("domain");
        std::function<double(double)> u_prime;
        double sup_u2 = std::numeric_limits<double>::infinity();
        if (fname == "gaussian") {
            u_prime = [](double t) { return -2.0 * t * std::exp(-t * t); };
            sup_u2 = 2.0;
        } else if (fname == "linear") {
            u_prime = [](double) { return 1.0; };
            sup_u2 = 0.0;
        } else if (fname == "sqrt-abs") {
            u_prime = [](double t) {
                return 0.5 / std::sqrt(std::fabs(t)) * (t > 0.0 ? 1.0 : -1.0);
            };
            if (a <= 0.0 && b >= 0.0)
                throw std::runtime_error("sqrt-abs sweep region must exclude the kink at 0");
        } else {
            throw std::runtime_error("derivative sweep supports gaussian|linear|sqrt-abs");
        }
        report = nlcalc::derivative_sweep(kernel, u.fn, u_prime, sup_u2, epsilons, a, b,
                                          static_cast<std::size_t>(s.integer("points")),
                                          u.kinks);
    } else if (experiment == "antiderivative") {
        const std::string fname = s.str("function");
        std::function<double(double)> F, v_ref;
        if (fname == "runge") {
            F = [](double t) { return 1.0 / (1.0 + t * t); };
            v_ref = [](double t) { return std::atan(t); };
        } else if (fname == "gaussian") {
            F = [](double t) { return std::exp(-t * t); };
            v_ref = [](double t) { return std::sqrt(M_PI) / 2.0 * std::erf(t); };
        } else {
            throw std::runtime_error("antiderivative sweep supports runge|gaussian");
        }
        const auto [a, b] = s.interval("domain");
        if (a != -b) throw std::runtime_error("antiderivative sweep domain must be -T,T");
        nlcalc::SolverConfig cfg;
        cfg.null_threshold = s.num("tau");
        cfg.compute_residual = false;
        const double p_norms[] = {0.0, 2.0};
        report = nlcalc::antiderivative_sweep(kernel, F, v_ref, epsilons, p_norms, b,
                                              static_cast<std::size_t>(s.integer("n")),
                                              0.8 * b, cfg);
    } else if (experiment == "zero-scaling") {
        report = nlcalc::zero_scaling_sweep(kernel, epsilons, s.num("window"),
                                            static_cast<int>(s.integer("resolution")));
    } else {
        throw std::runtime_error("unknown experiment (derivative|antiderivative|zero-scaling)");
    }

    ordered_json j = sidecar_header("sweep", s);
    j.update(ordered_json::parse(nlcalc::to_json(report)));
    write_text(s.str("output"), j.dump(2));
    return 0;
}

int run_figure(Settings& s) {
    const auto [a, b] = s.interval("domain");
    const nlcalc::FigureDataset data = nlcalc::figure_sqrt_curves(
        s.num_list("epsilon"), a, b, static_cast<std::size_t>(s.integer("points")));
    const std::string out = s.str("output");
    if (out == "-") throw std::runtime_error("figure needs --output for its CSV");
    nlcalc::write_figure_csv(data, out);
    write_text(out + ".json", sidecar_header("figure", s).dump(2));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonlocal derivative and antiderivative toolkit"};
    app.require_subcommand(1);
    app.footer("NLCALC_THREADS caps worker threads. Config files hold key = value\n"
               "lines using the flag names; command-line flags override them.");

    Settings s;
    std::string config_path;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key = value configuration file");
        bind_kernel_options(cmd, s);
        bind(cmd, s, "epsilon", "nonlocality parameter (repeatable)", true);
        bind(cmd, s, "output", "output path ('-' for stdout)");
        return cmd;
    };

    CLI::App* check = add_common(app.add_subcommand(
        "check-kernel", "evaluate admissibility flags; exit 0 iff required flags pass"));
    bind(check, s, "require",
         "required flags: antisymmetry,dipole,analytic,positivity,flatness,all", true);
    bind(check, s, "samples", "sample-grid size for the checks");
    bind(check, s, "tolerance", "check tolerance");

    CLI::App* derive = add_common(app.add_subcommand(
        "derive", "apply the nonlocal derivative, one CSV column per epsilon"));
    bind(derive, s, "input", "grid-function CSV input");
    bind(derive, s, "function", "builtin input: linear|sqrt-abs|gaussian|runge|zero");
    bind(derive, s, "domain", "evaluation interval a,b");
    bind(derive, s, "points", "number of evaluation points");
    bind(derive, s, "annihilation", "probe mode exp(i n pi t / eps) and report its residual");

    CLI::App* antiderive = add_common(app.add_subcommand(
        "antiderive", "solve the nonlocal antidifferentiation problem by spectral division"));
    bind(antiderive, s, "input", "right-hand-side grid CSV (domain must be -T,T)");
    bind(antiderive, s, "function", "builtin right-hand side: gaussian|runge|zero");
    bind(antiderive, s, "domain", "sampling interval -T,T");
    bind(antiderive, s, "n", "sample count (power of two)");
    bind(antiderive, s, "tau", "relative null threshold for spectrum bins");
    bind(antiderive, s, "constant-policy", "zero-mean or fixed:<value>");
    bind(antiderive, s, "strict-boundary", "fail when the data does not decay at the boundary");
    bind(antiderive, s, "residual", "verify the solve through the derivative (true/false)");

    CLI::App* zeros = add_common(app.add_subcommand(
        "zeros", "locate zeros of the kernel symbol (scaled sets per epsilon when given)"));
    bind(zeros, s, "window", "search window for the unscaled symbol");
    bind(zeros, s, "resolution", "bracketing samples per unit frequency");

    CLI::App* sweep = add_common(app.add_subcommand(
        "sweep", "epsilon sweeps: derivative | antiderivative | zero-scaling"));
    bind(sweep, s, "experiment", "derivative|antiderivative|zero-scaling");
    bind(sweep, s, "function", "input function for the experiment");
    bind(sweep, s, "domain", "region (derivative) or sampling interval (antiderivative)");
    bind(sweep, s, "points", "region samples (derivative sweep)");
    bind(sweep, s, "n", "solver sample count (antiderivative sweep)");
    bind(sweep, s, "tau", "solver null threshold");
    bind(sweep, s, "window", "zero search window (zero-scaling sweep)");
    bind(sweep, s, "resolution", "zero bracketing resolution");

    CLI::App* figure = add_common(app.add_subcommand(
        "figure", "square-root profile curves per epsilon next to the classical derivative"));
    bind(figure, s, "domain", "curve interval a,b");
    bind(figure, s, "points", "curve samples");

    s.set_default("output", "-");
    s.set_default("require", "antisymmetry,dipole,analytic");
    s.set_default("samples", "4096");
    s.set_default("tolerance", "1e-12");
    s.set_default("function", "gaussian");
    s.set_default("domain", "-4,4");
    s.set_default("points", "201");
    s.set_default("n", "8192");
    s.set_default("tau", "1e-8");
    s.set_default("constant-policy", "zero-mean");
    s.set_default("strict-boundary", "true");
    s.set_default("residual", "true");
    s.set_default("window", "3");
    s.set_default("resolution", "64");
    s.set_default("epsilon", "1,0.5,0.25");
    s.set_default("experiment", "derivative");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) s.load_file(config_path);
        if (check->parsed()) return run_check_kernel(s);
        if (derive->parsed()) return run_derive(s);
        if (antiderive->parsed()) return run_antiderive(s);
        if (zeros->parsed()) return run_zeros(s);
        if (sweep->parsed()) return run_sweep(s);
        if (figure->parsed()) return run_figure(s);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
