#include "gfe/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "gfe/config.hpp"
#include "gfe/ergo.hpp"
#include "gfe/levy.hpp"
#include "gfe/pde.hpp"
#include "gfe/pdmp.hpp"
#include "gfe/spectral.hpp"
#include "gfe/tilt.hpp"

#ifndef GFE_BUILD_ID
#define GFE_BUILD_ID "unknown"
#endif

namespace gfe::cli {

const char* build_id() { return GFE_BUILD_ID; }

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Common {
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out_dir = ".";
    bool no_timestamp = false;
};

using Params = std::vector<std::pair<std::string, std::string>>;

struct Loaded {
    KeyValueConfig config;
    Model model;
};

Loaded load_model(const std::string& path) {
    auto config = KeyValueConfig::load(path);
    auto model = Model::validate(model_spec_from_config(config));
    return {std::move(config), std::move(model)};
}

class Output {
public:
    Output(const Common& common, std::string command, std::string label, Params params)
        : common_(common), command_(std::move(command)), label_(std::move(label)), params_(std::move(params)) {}

    /// Writes `body` under a header comment into --out/name and returns the path.
    fs::path write(const std::string& name, const std::string& body) const {
        const fs::path dir(common_.out_dir);
        std::error_code ec;
        fs::create_directories(dir, ec);
        const fs::path path = dir / name;
        std::ofstream os(path, std::ios::binary);
        if (!os) fail(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
        os << header('#') << body;
        os.close();
        if (!os) fail(ErrorCode::IoError, "failed writing " + path.string());
        return path;
    }

    json meta() const {
        json m;
        m["command"] = command_;
        m["seed"] = common_.seed;
        m["model"] = label_;
        m["build"] = build_id();
        json p = json::object();
        for (const auto& [k, v] : params_) p[k] = v;
        m["params"] = p;
        if (!common_.no_timestamp) m["timestamp"] = timestamp();
        return m;
    }

    std::string header(char mark) const {
        std::ostringstream os;
        os << mark << " command: " << command_ << '\n';
        os << mark << " seed: " << common_.seed << '\n';
        os << mark << " model: " << label_ << '\n';
        os << mark << " build: " << build_id() << '\n';
        for (const auto& [k, v] : params_) os << mark << " param " << k << ": " << v << '\n';
        if (!common_.no_timestamp) os << mark << " timestamp: " << timestamp() << '\n';
        return os.str();
    }

private:
    static std::string timestamp() {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&now, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }

    const Common& common_;
    std::string command_;
    std::string label_;
    Params params_;
};

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            fail(ErrorCode::ConfigError, "cannot parse number '" + item + "' in list '" + text + "'");
        }
    }
    if (out.empty()) fail(ErrorCode::ConfigError, "empty list '" + text + "'");
    return out;
}

/// LO:HI:K, log-spaced.
std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(parse_list(item).front());
    if (parts.size() != 3 || !(parts[0] > 0.0) || !(parts[1] > parts[0]) || parts[2] < 2) {
        fail(ErrorCode::ConfigError, "grid must be LO:HI:K with 0 < LO < HI and K >= 2, got '" + text + "'");
    }
    return log_spaced(parts[0], parts[1], static_cast<int>(parts[2]));
}

std::optional<levy::LevyParams> levy_params(const Model& model) {
    try {
        return levy::from_model(model);
    } catch (const Error&) {
        return std::nullopt;
    }
}

/// Shared by profile and stationary: which eigenfunction drives Y and which rho.
struct TiltChoice {
    std::string ell = "auto";
    std::optional<double> rho;
    std::string ell_grid = "0.05:20:25";
    std::size_t ell_n = 4000;
    double tmax = 2000.0;

    void add(CLI::App* sub) {
        sub->add_option("--ell", ell, "one | levy | table | auto")->check(CLI::IsMember({"one", "levy", "table", "auto"}));
        sub->add_option("--rho", rho, "spectral radius; estimated (or closed form) when absent");
        sub->add_option("--ell-grid", ell_grid, "LO:HI:K for --ell table");
        sub->add_option("--ell-n", ell_n, "return samples per table node");
        sub->add_option("--tmax", tmax, "censoring time for return samples");
    }

    TiltedModel build(const Model& model, std::uint64_t seed, Params& params) const {
        const auto lp = levy_params(model);
        std::string kind = ell;
        if (kind == "auto") kind = lp ? "levy" : "table";
        double r = 0.0;
        if (rho) {
            r = *rho;
        } else if (lp) {
            r = levy::theta0_rho(*lp).rho;
        } else {
            HitOptions ho;
            ho.n = ell_n * 5;
            ho.t_max = tmax;
            ho.seed = derive_seed(seed, 101);
            r = estimate_rho(model, ho).rho_hat;
        }
        params.emplace_back("ell", kind);
        params.emplace_back("rho", num(r));
        if (kind == "one") return TiltedModel(model, Eigenfunction::constant_one(), r);
        if (kind == "levy") {
            if (!lp) fail(ErrorCode::InvalidParameter, "--ell levy needs linear growth, constant rate and power_beta");
            return TiltedModel(model, Eigenfunction::power_law(levy::theta0_rho(*lp).theta0 - 1.0, model.x0()), r);
        }
        HitOptions ho;
        ho.n = ell_n;
        ho.t_max = tmax;
        ho.seed = derive_seed(seed, 102);
        const auto grid = parse_grid(ell_grid);
        params.emplace_back("ell_grid", ell_grid);
        return TiltedModel(model, Eigenfunction::from_table(build_ell_table(model, r, grid, ho)), r);
    }
};

json issues_json(const ValidationReport& report) {
    json arr = json::array();
    for (const auto& i : report.issues) {
        arr.push_back({{"code", std::string(to_string(i.code))},
                       {"message", i.message},
                       {"location", i.location},
                       {"value", i.value}});
    }
    return arr;
}

int exit_code(ErrorCode code) {
    switch (kind_of(code)) {
        case ErrorKind::Validation:
            return 2;
        case ErrorKind::Io:
            return 4;
        case ErrorKind::Estimation:
            break;
    }
    return 3;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Growth-fragmentation spectral toolkit", "gfe"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--seed", common.seed, "master seed")->capture_default_str();
    app.add_option("--threads", common.threads, "worker threads (0 = all available)");
    app.add_option("--out", common.out_dir, "output directory")->capture_default_str();
    app.add_flag("--no-timestamp", common.no_timestamp, "omit the timestamp from output headers");
    app.fallthrough();

    std::function<void()> action;

    // validate
    std::string model_path;
    auto* validate = app.add_subcommand("validate", "check a model config against the validation grid");
    validate->add_option("model", model_path, "model config")->required();
    validate->callback([&] {
        action = [&] {
            auto config = KeyValueConfig::load(model_path);
            const auto spec = model_spec_from_config(config);
            const auto report = check_model(spec);
            json j;
            j["model"] = spec.label;
            j["ok"] = report.ok();
            j["ratio_integral"] = report.ratio_integral;
            j["issues"] = issues_json(report);
            if (!report.ok()) throw ValidationError(report);
            out << j.dump(2) << '\n';
        };
    });

    // simulate
    double x = 1.0, t = 1.0;
    std::size_t n = 10000;
    auto* simulate = app.add_subcommand("simulate", "simulate paths of X");
    simulate->add_option("--model", model_path)->required();
    simulate->add_option("--x", x)->capture_default_str();
    simulate->add_option("--t", t)->capture_default_str();
    simulate->add_option("--n", n)->capture_default_str();
    simulate->callback([&] {
        action = [&] {
            const auto m = load_model(model_path);
            Params p{{"x", num(x)}, {"t", num(t)}, {"n", std::to_string(n)}};
            const auto paths = map_indices(n, Execution::Parallel, [&](std::size_t i) {
                Rng rng = path_stream(common.seed, i);
                return simulate_path(m.model, x, t, rng);
            });
            std::ostringstream body;
            body << "path_id,end_time,end_mass,log_E,jumps\n";
            for (std::size_t i = 0; i < paths.size(); ++i) {
                body << i << ',' << num(paths[i].end_time) << ',' << num(paths[i].end_mass()) << ','
                     << num(paths[i].log_E) << ',' << paths[i].events.size() << '\n';
            }
            std::ostringstream events;
            write_trajectories_csv(events, paths);
            const Output o(common, "simulate", m.model.label(), p);
            out << "wrote " << o.write("simulate.csv", body.str()).string() << '\n';
            out << "wrote " << o.write("trajectories.csv", events.str()).string() << '\n';
        };
    });

    // semigroup
    std::string f_spec = "bump:1.0;0.5";
    auto* semigroup = app.add_subcommand("semigroup", "Feynman-Kac estimate of T_t f(x)");
    semigroup->add_option("--model", model_path)->required();
    semigroup->add_option("--x", x)->capture_default_str();
    semigroup->add_option("--t", t)->capture_default_str();
    semigroup->add_option("--f", f_spec)->capture_default_str();
    semigroup->add_option("--n", n)->capture_default_str();
    semigroup->callback([&] {
        action = [&] {
            const auto m = load_model(model_path);
            const auto f = TestFunction::parse(f_spec);
            Params p{{"x", num(x)}, {"t", num(t)}, {"f", f_spec}, {"n", std::to_string(n)}};
            const auto e = feynman_kac(m.model, x, t, f, PathOptions{n, common.seed, Execution::Parallel});
            std::ostringstream body;
            body << "x,t,f,estimate,std_error,n\n"
                 << num(x) << ',' << num(t) << ',' << f.name() << ',' << num(e.mean) << ',' << num(e.std_error)
                 << ',' << n << '\n';
            const Output o(common, "semigroup", m.model.label(), p);
            const auto path = o.write("semigroup.csv", body.str());
            out << "T_t f(x) = " << num(e.mean) << " +- " << num(e.std_error) << "\nwrote " << path.string() << '\n';
        };
    });

    // find-rho
    double tmax = 200.0;
    auto* find = app.add_subcommand("find-rho", "estimate the spectral radius from returns to x0");
    find->add_option("--model", model_path)->required();
    find->add_option("--n", n)->capture_default_str();
    find->add_option("--tmax", tmax)->capture_default_str();
    find->callback([&] {
        action = [&] {
            const auto m = load_model(model_path);
            Params p{{"n", std::to_string(n)}, {"tmax", num(tmax)}, {"x0", num(m.model.x0())}};
            const auto s = estimate_rho(m.model, HitOptions{n, tmax, common.seed, Execution::Parallel});
            std::ostringstream body;
            body << "rho_hat,std_error,ci_lo,ci_hi,L_at_rho,L_std_error,minus_Lprime,divergent,hit_fraction,"
                    "censor_fraction,N,T_max,seed\n"
                 << num(s.rho_hat) << ',' << num(s.std_error) << ',' << num(s.ci_lo) << ',' << num(s.ci_hi) << ','
                 << num(s.L_at_rho) << ',' << num(s.L_std_error) << ',' << num(s.minus_Lprime) << ','
                 << (s.divergent ? 1 : 0) << ',' << num(s.hit_fraction) << ',' << num(s.censor_fraction) << ','
                 << s.N << ',' << num(s.T_max) << ',' << s.seed << '\n';
            const Output o(common, "find-rho", m.model.label(), p);
            const auto path = o.write("spectral.csv", body.str());
            out << "rho_hat = " << num(s.rho_hat) << " (95% CI " << num(s.ci_lo) << ", " << num(s.ci_hi) << ")"
                << (s.divergent ? " [divergent derivative]" : "") << "\nwrote " << path.string() << '\n';
        };
    });

    // ell
    double rho = 0.0;
    std::string grid_spec = "0.25:4:9";
    auto* ell = app.add_subcommand("ell", "tabulate ell(x) = L_{x,x0}(rho)");
    ell->add_option("--model", model_path)->required();
    ell->add_option("--rho", rho)->required();
    ell->add_option("--grid", grid_spec, "LO:HI:K, log-spaced")->capture_default_str();
    ell->add_option("--n", n)->capture_default_str();
    ell->add_option("--tmax", tmax)->capture_default_str();
    ell->callback([&] {
        action = [&] {
            const auto m = load_model(model_path);
            Params p{{"rho", num(rho)}, {"grid", grid_spec}, {"n", std::to_string(n)}, {"tmax", num(tmax)}};
            const auto grid = parse_grid(grid_spec);
            const auto table = build_ell_table(m.model, rho, grid, HitOptions{n, tmax, common.seed, Execution::Parallel});
            std::ostringstream body;
            body << "x,ell,std_error,hits,valid\n";
            for (const auto& pt : table.points()) {
                body << num(pt.x) << ',' << num(pt.value) << ',' << num(pt.std_error) << ',' << pt.hits << ','
                     << (pt.valid ? 1 : 0) << '\n';
            }
            const Output o(common, "ell", m.model.label(), p);
            out << "wrote " << o.write("ell_table.csv", body.str()).string() << '\n';
        };
    });

    // profile
    std::string t_list = "2,4,8";
    TiltChoice tilt;
    auto* profile = app.add_subcommand("profile", "e^{-rho t} T_t f(x) by direct and tilted estimators");
    profile->add_option("--model", model_path)->required();
    profile->add_option("--f", f_spec)->capture_default_str();
    profile->add_option("--x", x)->capture_default_str();
    profile->add_option("--t", t_list, "comma-separated times")->capture_default_str();
    profile->add_option("--n", n)->capture_default_str();
    tilt.add(profile);
    profile->callback([&] {
        action = [&] {
            const auto m = load_model(model_path);
            const auto f = TestFunction::parse(f_spec);
            const auto times = parse_list(t_list);
            Params p{{"f", f_spec}, {"x", num(x)}, {"t", t_list}, {"n", std::to_string(n)}};
            const auto tm = tilt.build(m.model, common.seed, p);
            std::ostringstream body;
            body << "t,direct,direct_se,tilted,tilted_se\n";
            for (std::size_t k = 0; k < times.size(); ++k) {
                const auto v = asymptotic_profile(tm, f, x, times[k],
                                                  ProfileOptions{n, derive_seed(common.seed, k), Execution::Parallel});
                body << num(v.t) << ',' << num(v.direct) << ',' << num(v.direct_se) << ',' << num(v.tilted) << ','
                     << num(v.tilted_se) << '\n';
            }
            const Output o(common, "profile", m.model.label(), p);
            out << "wrote " << o.write("profile.csv", body.str()).string() << '\n';
        };
    });

    // stationary
    StationaryOptions so;
    std::size_t curve_n = 4000;
    auto* stationary = app.add_subcommand("stationary", "occupation histogram of Y against the return-time curve");
    stationary->add_option("--model", model_path)->required();
    stationary->add_option("--trun", so.t_run)->capture_default_str();
    stationary->add_option("--tburn", so.t_burn)->capture_default_str();
    stationary->add_option("--bins", so.bins)->capture_default_str();
    stationary->add_option("--ylo", so.y_lo)->capture_default_str();
    stationary->add_option("--yhi", so.y_hi)->capture_default_str();
    stationary->add_option("--batches", so.batches)->capture_default_str();
    stationary->add_option("--curve-n", curve_n, "return samples per curve node")->capture_default_str();
    tilt.add(stationary);
    stationary->callback([&] {
        action = [&] {
            const auto m = load_model(model_path);
            Params p{{"trun", num(so.t_run)},       {"tburn", num(so.t_burn)}, {"bins", std::to_string(so.bins)},
                     {"ylo", num(so.y_lo)},         {"yhi", num(so.y_hi)},     {"batches", std::to_string(so.batches)},
                     {"curve_n", std::to_string(curve_n)}};
            const auto tm = tilt.build(m.model, common.seed, p);
            so.seed = derive_seed(common.seed, 1);
            so.curve = HitOptions{curve_n, tilt.tmax, derive_seed(common.seed, 2), Execution::Parallel};
            const auto r = stationary_density(tm, so);
            p.emplace_back("chi2", num(r.chi2));
            p.emplace_back("critical", num(r.critical));
            p.emplace_back("dof", std::to_string(r.dof));
            p.emplace_back("fraction_in_range", num(r.fraction_in_range));
            std::ostringstream body;
            body << "bin_lo,bin_hi,empirical,model_curve,empirical_se,model_se\n";
            for (std::size_t b = 0; b < r.centers.size(); ++b) {
                body << num(r.edges[b]) << ',' << num(r.edges[b + 1]) << ',' << num(r.empirical[b]) << ','
                     << num(r.model_curve[b]) << ',' << num(r.empirical_se[b]) << ',' << num(r.model_se[b]) << '\n';
            }
            const Output o(common, "stationary", m.model.label(), p);
            const auto path = o.write("stationary.csv", body.str());
            out << "chi2 = " << num(r.chi2) << " (critical " << num(r.critical) << ", dof " << r.dof << ") "
                << (r.passes ? "pass" : "fail") << "\nwrote " << path.string() << '\n';
        };
    });

    // levy-analytic
    levy::LevyParams lp;
    std::string q_list = "1,1.25,1.5";
    auto* analytic = app.add_subcommand("levy-analytic", "closed-form values for the homogeneous case");
    analytic->add_option("--a", lp.a)->capture_default_str();
    analytic->add_option("--lambda", lp.lambda)->capture_default_str();
    analytic->add_option("--beta", lp.beta)->capture_default_str();
    analytic->add_option("--q", q_list, "points for L(q)")->capture_default_str();
    analytic->callback([&] {
        action = [&] {
            levy::check(lp);
            const Params p{{"a", num(lp.a)}, {"lambda", num(lp.lambda)}, {"beta", num(lp.beta)}, {"q", q_list}};
            const Output o(common, "levy-analytic", "levy", p);
            const auto tr = levy::theta0_rho(lp);
            json j = o.meta();
            j["psi"] = {{"0", levy::psi(lp, 0.0)}, {"1", levy::psi(lp, 1.0)}, {"2", levy::psi(lp, 2.0)}};
            j["kappa_0"] = levy::kappa(lp, 0.0);
            j["theta0"] = tr.theta0;
            j["rho"] = tr.rho;
            j["kappa_second_theta0"] = levy::kappa_second(lp, tr.theta0);
            j["Phi_0"] = levy::Phi(lp, 0.0);
            json L = json::array();
            for (double q : parse_list(q_list)) {
                json e{{"q", q}};
                if (q >= tr.rho) {
                    e["L"] = levy::L_closed(lp, q);
                    e["minus_Lprime"] = levy::minus_Lprime_closed(lp, q);
                } else {
                    e["L"] = nullptr;
                }
                L.push_back(e);
            }
            j["L"] = L;
            j["ell_exponent"] = tr.theta0 - 1.0;
            out << j.dump(2) << '\n';
        };
    });

    // pde-solve
    pde::PdeOptions po;
    bool n_grid_set = false;
    auto* solve = app.add_subcommand("pde-solve", "backward evolution of g = f/x on the log grid");
    solve->add_option("--model", model_path)->required();
    solve->add_option("--f", f_spec)->capture_default_str();
    solve->add_option("--t", t)->capture_default_str();
    solve->add_option("--n-grid", po.n, "grid points (overrides pde.n)")->each([&](const std::string&) { n_grid_set = true; });
    solve->callback([&] {
        action = [&] {
            const auto m = load_model(model_path);
            pde::PdeOptions opt;
            opt.n = m.config.get_int("pde.n", opt.n);
            opt.x_min = m.config.get_double("pde.x_min", opt.x_min);
            opt.x_max = m.config.get_double("pde.x_max", opt.x_max);
            opt.cfl = m.config.get_double("pde.cfl", opt.cfl);
            opt.quad_nodes = m.config.get_int("pde.quad_nodes", opt.quad_nodes);
            if (n_grid_set) opt.n = po.n;
            const auto f = TestFunction::parse(f_spec);
            Params p{{"f", f_spec},          {"t", num(t)},         {"n_grid", std::to_string(opt.n)},
                     {"x_min", num(opt.x_min)}, {"x_max", num(opt.x_max)}, {"cfl", num(opt.cfl)},
                     {"quad_nodes", std::to_string(opt.quad_nodes)}};
            const pde::PdeGrid grid(opt);
            const auto r = pde::evolve_semigroup(m.model, grid, f, t);
            p.emplace_back("steps", std::to_string(r.steps));
            p.emplace_back("dt", num(r.dt));
            std::ostringstream body;
            body << "x,g_t,boundary_leak_estimate\n";
            for (int i = 0; i < grid.size(); ++i) {
                const auto k = static_cast<std::size_t>(i);
                body << num(grid.x(i)) << ',' << num(r.g.values[k]) << ',' << num(r.boundary_leak[k]) << '\n';
            }
            const Output o(common, "pde-solve", m.model.label(), p);
            const auto path = o.write("pde_solution.csv", body.str());
            out << "T_t f(x0) = " << num(pde::semigroup_value(grid, r, m.model.x0())) << "\nwrote " << path.string()
                << '\n';
        };
    });

    // check-ergodicity
    double A = 1.0, B = 1.0;
    auto* ergodic = app.add_subcommand("check-ergodicity", "Foster-Lyapunov drift check");
    ergodic->add_option("--model", model_path)->required();
    ergodic->add_option("--A", A)->capture_default_str();
    ergodic->add_option("--B", B)->capture_default_str();
    ergodic->callback([&] {
        action = [&] {
            const auto m = load_model(model_path);
            const Params p{{"A", num(A)}, {"B", num(B)}};
            const auto rep = ergo::check_assumptions(m.model, A, B);
            const auto drift = ergo::drift_profile(m.model, ergo::LyapunovSpec(A, B));
            const Output o(common, "check-ergodicity", m.model.label(), p);
            json j = o.meta();
            j["assumptions"] = {
                {"M_A", rep.M_A},
                {"M_minus_B", rep.M_minus_B},
                {"beta0", rep.rates.beta0},
                {"gamma0", rep.rates.gamma0},
                {"beta_inf", rep.rates.beta_inf},
                {"gamma_inf", rep.rates.gamma_inf},
                {"rate_inequalities", {{"moment_A", rep.rate_moment_A}, {"gamma_inf", rep.rate_gamma_inf},
                             {"tail", rep.rate_tail}, {"small", rep.rate_small}, {"all", rep.rate_conditions}}},
                {"brace_inf", rep.brace_inf},
                {"brace_zero", rep.brace_zero},
                {"drift", {{"tail", rep.drift_tail}, {"small", rep.drift_small}, {"all", rep.drift_conditions}}},
                {"direction_discrepancy", rep.direction_discrepancy},
                {"note", rep.note}};
            json d{{"status", drift.certified ? "Certified" : "NotCertified"},
                   {"alpha", drift.alpha},
                   {"delta", drift.delta},
                   {"center", {drift.center_lo, drift.center_hi}},
                   {"violation_count", drift.violations.size()},
                   {"note", drift.note}};
            if (!drift.violations.empty()) d["violation_range"] = {drift.violations.front(), drift.violations.back()};
            j["drift"] = d;
            out << j.dump(2) << '\n';
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << json{{"error", "UsageError"}, {"kind", "validation"}, {"message", e.what()}}.dump() << '\n';
        return 2;
    }

    try {
        set_thread_count(common.threads);
        if (action) action();
        return 0;
    } catch (const ValidationError& e) {
        err << json{{"error", std::string(to_string(e.code()))},
                    {"kind", "validation"},
                    {"message", e.what()},
                    {"issues", issues_json(e.report())}}
                   .dump()
            << '\n';
        return 2;
    } catch (const Error& e) {
        const int code = exit_code(e.code());
        const char* kind = code == 2 ? "validation" : code == 4 ? "io" : "estimation";
        err << json{{"error", std::string(to_string(e.code()))}, {"kind", kind}, {"message", e.what()}}.dump() << '\n';
        return code;
    } catch (const std::exception& e) {
        err << json{{"error", "Internal"}, {"kind", "estimation"}, {"message", e.what()}}.dump() << '\n';
        return 3;
    }
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace gfe::cli
