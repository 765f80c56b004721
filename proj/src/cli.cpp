#include "rpkit/cli.hpp"

#include <chrono>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "rpkit/cocycle.hpp"
#include "rpkit/definiteness.hpp"
#include "rpkit/errors.hpp"
#include "rpkit/gram.hpp"
#include "rpkit/io.hpp"
#include "rpkit/monte_carlo.hpp"
#include "rpkit/negdef.hpp"
#include "rpkit/parallel.hpp"
#include "rpkit/process.hpp"
#include "rpkit/quotient.hpp"
#include "rpkit/sampling.hpp"

namespace rpkit::cli {

namespace {

// Options that control where and how output goes; excluded from the resolved parameters.
const std::vector<std::string> kPlumbing{"config", "output", "format", "threads", "help", "help-all"};

struct Outcome {
    json result;
    bool pass = true;
};

struct KernelOpts {
    std::string kernel = "exponential";
    double lambda = 1.0;
    double hurst = 0.5;
    std::string table;

    KernelSpec build() const
    {
        if (kernel == "exponential")
            return KernelSpec::exponential(lambda);
        if (kernel == "bm2")
            return KernelSpec::brownian_two_sided();
        if (kernel == "fbm")
            return KernelSpec::fractional_brownian(hurst);
        if (kernel == "bm1")
            return KernelSpec::brownian_one_sided();
        if (kernel == "normalized1")
            return KernelSpec::normalized_one_sided();
        if (table.empty())
            throw DomainError("--kernel table requires --table");
        return read_kernel_csv_file(table);
    }
};

struct PsiOpts {
    std::string psi = "power";
    double alpha = 1.0;
    std::string triple;
    std::string psi_table;

    PsiSpec build() const
    {
        if (psi == "power")
            return PsiSpec::power(alpha);
        if (psi == "abs")
            return PsiSpec::absolute_value();
        if (psi == "lk")
            return PsiSpec::lk(parse_triple(triple));
        if (psi_table.empty())
            throw DomainError("--psi table requires --psi-table");
        const auto s = read_psi_csv_file(psi_table);
        return PsiSpec::tabulated(s.t, s.psi);
    }

    static LKTriple parse_triple(const std::string& text)
    {
        if (text.empty())
            throw DomainError("--triple is required");
        json j;
        try {
            if (text.front() == '@') {
                std::ifstream in(text.substr(1));
                if (!in)
                    throw DomainError("cannot open " + text.substr(1));
                j = json::parse(in);
            } else {
                j = json::parse(text);
            }
        } catch (const json::exception& e) {
            throw DomainError(std::string("--triple: ") + e.what());
        }
        try {
            return j.get<LKTriple>();
        } catch (const json::exception& e) {
            throw DomainError(std::string("--triple: ") + e.what());
        }
    }
};

std::vector<double> parse_vector(const std::string& text, const char* flag)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos)
            throw DomainError(std::string(flag) + ": empty entry in '" + text + "'");
        item = item.substr(b, e - b + 1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc{} || ptr != item.data() + item.size() || !std::isfinite(v))
            throw DomainError(std::string(flag) + ": not a number '" + item + "'");
        out.push_back(v);
    }
    if (out.empty())
        throw DomainError(std::string(flag) + ": empty list");
    return out;
}

/// "lo,hi,n" -> n log-spaced values.
std::vector<double> parse_logspace(const std::string& text)
{
    const auto v = parse_vector(text, "--lambda-logspace");
    if (v.size() != 3 || !(v[0] > 0.0) || !(v[1] > v[0]) || v[2] < 2 || v[2] != std::floor(v[2]))
        throw DomainError("--lambda-logspace expects lo,hi,n with 0 < lo < hi and integer n >= 2");
    const auto n = static_cast<int>(v[2]);
    std::vector<double> out;
    for (int i = 0; i < n; ++i)
        out.push_back(std::pow(10.0, std::log10(v[0]) + (std::log10(v[1]) - std::log10(v[0])) * i / (n - 1)));
    return out;
}

ToleranceConfig tolerance_from(double psd, double nd, double rank, double recon)
{
    ToleranceConfig t{psd, nd, rank, recon};
    t.validate();
    return t;
}

Reflection parse_reflection(const std::string& r)
{
    return r == "inversion" ? Reflection::Inversion : Reflection::Negation;
}

ProcessSpec build_process(const std::string& name, double hurst)
{
    if (name == "bm2")
        return ProcessSpec::brownian_two_sided();
    if (name == "fbm")
        return ProcessSpec::fractional_brownian(hurst);
    if (name == "bm1")
        return ProcessSpec::brownian_one_sided();
    return ProcessSpec::normalized_one_sided();
}

json scalar_from_string(const std::string& s)
{
    if (s == "true")
        return true;
    if (s == "false")
        return false;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(v)) {
        if (v == std::floor(v) && std::abs(v) < 9.0e15 && s.find_first_of(".eE") == std::string::npos)
            return static_cast<std::int64_t>(v);
        return v;
    }
    return s;
}

/// Resolved parameters of the selected subcommand, keyed by long flag name.
json resolved_params(const CLI::App* sub)
{
    json params = json::object();
    for (const CLI::Option* opt : sub->get_options()) {
        if (opt->get_lnames().empty())
            continue;
        const std::string name = opt->get_lnames().front();
        if (std::find(kPlumbing.begin(), kPlumbing.end(), name) != kPlumbing.end())
            continue;
        if (opt->get_expected_min() == 0) {
            params[name] = opt->count() > 0;
            continue;
        }
        std::string value;
        if (opt->count() > 0)
            value = opt->results().back();
        else
            value = opt->get_default_str();
        if (value.empty())
            continue;
        params[name] = scalar_from_string(value);
    }
    return params;
}

void flatten(const json& j, const std::string& prefix, std::ostream& out)
{
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten(j[i], prefix + "." + std::to_string(i), out);
    } else {
        const std::string dumped = canonical_dump(j);
        out << prefix << ',' << (j.is_string() ? j.get<std::string>() : dumped) << '\n';
    }
}

/// Appends `--key value` tokens from a flat JSON object for keys not already on the command line.
void merge_config(std::vector<std::string>& args, const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw DomainError("cannot open config " + path);
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::exception& e) {
        throw DomainError("config " + path + ": " + e.what());
    }
    if (!cfg.is_object())
        throw DomainError("config must be a flat JSON object");
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        const std::string flag = "--" + it.key();
        const bool present = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
        if (present)
            continue;
        const json& v = it.value();
        if (v.is_boolean()) {
            if (v.get<bool>())
                args.push_back(flag);
        } else if (v.is_string()) {
            args.push_back(flag + "=" + v.get<std::string>());
        } else if (v.is_number()) {
            args.push_back(flag + "=" + canonical_dump(v));
        } else {
            throw DomainError("config key '" + it.key() + "' must be a scalar");
        }
    }
}

class Driver {
public:
    Driver()
    {
        app_.require_subcommand(1);
        app_.option_defaults()->always_capture_default();
        app_.set_help_all_flag("--help-all", "Expand all help");
        app_.footer("Exit codes: 0 pass, 1 mathematical failure, 2 usage or domain error.");
        build_check();
        build_quotient();
        build_simulate();
        build_lk();
        build_mc();
        build_cocycle();
    }

    int run(std::vector<std::string> args, std::ostream& out, std::ostream& err)
    {
        try {
            for (std::size_t i = 0; i + 1 < args.size(); ++i)
                if (args[i] == "--config") {
                    const std::string path = args[i + 1];
                    args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
                    merge_config(args, path);
                    break;
                } else if (args[i].rfind("--config=", 0) == 0) {
                    const std::string path = args[i].substr(9);
                    args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
                    merge_config(args, path);
                    break;
                }
        } catch (const std::exception& e) {
            err << "rpkit: " << e.what() << '\n';
            return Usage;
        }

        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try {
            app_.parse(reversed);
        } catch (const CLI::CallForHelp& e) {
            app_.exit(e, out, err);
            return Pass;
        } catch (const CLI::CallForAllHelp& e) {
            app_.exit(e, out, err);
            return Pass;
        } catch (const CLI::ParseError& e) {
            err << "rpkit: " << e.what() << '\n';
            return Usage;
        }

        if (!action_) {
            err << "rpkit: no command selected\n";
            return Usage;
        }
        const int threads = threads_ > 0 ? threads_ : env_threads();
        set_num_threads(threads);

        Outcome outcome;
        const auto start = std::chrono::steady_clock::now();
        try {
            outcome = action_();
        } catch (const DomainError& e) {
            err << "rpkit: " << e.what() << '\n';
            set_num_threads(0);
            return Usage;
        } catch (const std::exception& e) {
            err << "rpkit: " << e.what() << '\n';
            set_num_threads(0);
            return Usage;
        }
        set_num_threads(0);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        json envelope{{"command", command_name_},
                      {"params", resolved_params(leaf_)},
                      {"result", outcome.result},
                      {"wall_time_s", wall},
                      {"version", RPKIT_VERSION}};

        std::ofstream file;
        std::ostream* sink = &out;
        if (!output_.empty()) {
            file.open(output_);
            if (!file) {
                err << "rpkit: cannot open " << output_ << '\n';
                return Usage;
            }
            sink = &file;
        }
        if (format_ == "csv") {
            if (csv_writer_)
                csv_writer_(*sink);
            else
                flatten(outcome.result, "", *sink);
        } else {
            *sink << canonical_dump(envelope) << '\n';
        }
        return outcome.pass ? Pass : Fail;
    }

private:
    static int env_threads()
    {
        if (const char* env = std::getenv("RPKIT_THREADS")) {
            int v = 0;
            const std::string s(env);
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec == std::errc{} && ptr == s.data() + s.size() && v > 0)
                return v;
        }
        return 0;
    }

    void add_common(CLI::App* sub)
    {
        sub->add_option("--threads", threads_, "Worker threads (default: RPKIT_THREADS or the OpenMP default)")
            ->check(CLI::PositiveNumber);
        sub->add_option("--config", config_, "Flat JSON file of option values; command-line flags take precedence");
        sub->add_option("--format", format_, "Output format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--output", output_, "Write output to this file instead of stdout");
    }

    void add_tolerances(CLI::App* sub)
    {
        sub->add_option("--psd-tol", tol_.psd_tol, "Relative PSD tolerance");
        sub->add_option("--nd-tol", tol_.nd_tol, "Relative negative-definiteness tolerance");
        sub->add_option("--rank-tol", tol_.rank_tol, "Relative numerical-rank threshold");
        sub->add_option("--recon-tol", tol_.recon_tol, "Quotient consistency tolerance");
    }

    void add_kernel(CLI::App* sub)
    {
        sub->add_option("--kernel", kernel_.kernel, "Kernel")
            ->check(CLI::IsMember({"exponential", "bm2", "fbm", "bm1", "normalized1", "table"}));
        sub->add_option("--lambda", kernel_.lambda, "Exponential rate");
        sub->add_option("--hurst", kernel_.hurst, "Hurst index for fbm");
        sub->add_option("--table", kernel_.table, "Kernel CSV (grid in first row and column)");
    }

    void add_psi(CLI::App* sub)
    {
        sub->add_option("--psi", psi_.psi, "Function psi")->check(CLI::IsMember({"power", "abs", "lk", "table"}));
        sub->add_option("--alpha", psi_.alpha, "Exponent for --psi power");
        sub->add_option("--triple", psi_.triple, "LK triple as JSON, or @file");
        sub->add_option("--psi-table", psi_.psi_table, "Two-column CSV (t, psi)");
    }

    CLI::App* leaf(CLI::App* sub, std::string name, std::function<Outcome()> action)
    {
        sub->callback([this, sub, name = std::move(name), action = std::move(action)] {
            leaf_ = sub;
            command_name_ = name;
            action_ = action;
        });
        add_common(sub);
        return sub;
    }

    Grid grid() const { return Grid::parse(grid_); }

    void build_check()
    {
        auto* check = app_.add_subcommand("check", "Definiteness and reflection checks");
        check->require_subcommand(1);

        auto grid_opt = [this](CLI::App* s) { s->add_option("--grid", grid_, "start:stop:step or comma list")->required(); };

        auto* pd = leaf(check->add_subcommand("pd", "Positive semidefiniteness of a kernel Gram matrix"), "check pd", [this] {
            const auto v = check_positive_semidefinite(gram(kernel_.build(), grid()), tol());
            return Outcome{json(v), v.pass};
        });
        add_kernel(pd);
        grid_opt(pd);
        add_tolerances(pd);

        auto* nd = leaf(check->add_subcommand("nd", "Negative definiteness of psi(s - t), or of a kernel Gram matrix"),
                        "check nd", [this] {
                            const auto g = grid();
                            Eigen::MatrixXd m(g.size(), g.size());
                            if (nd_source_ == "kernel") {
                                m = gram(kernel_.build(), g).entries;
                            } else {
                                const auto p = psi_.build();
                                for (std::size_t i = 0; i < g.size(); ++i)
                                    for (std::size_t j = 0; j < g.size(); ++j)
                                        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = eval_psi(p, g[i] - g[j]);
                            }
                            const auto v = check_negative_definite(GramMatrix::from_matrix(m), tol());
                            return Outcome{json(v), v.pass};
                        });
        nd->add_option("--source", nd_source_, "Matrix source")->check(CLI::IsMember({"psi", "kernel"}));
        add_psi(nd);
        add_kernel(nd);
        grid_opt(nd);
        add_tolerances(nd);

        auto* rp = leaf(check->add_subcommand("reflection-positive", "PSD of the reflected kernel on the positive part"),
                        "check reflection-positive", [this] {
                            const auto g = reflected_gram(kernel_.build(), ReflectionSetup(parse_reflection(reflection_), grid()));
                            const auto v = check_positive_semidefinite(g, tol());
                            return Outcome{json(v), v.pass};
                        });
        add_kernel(rp);
        grid_opt(rp);
        rp->add_option("--reflection", reflection_, "negation: s -> -s on (0, inf); inversion: s -> 1/s")
            ->check(CLI::IsMember({"negation", "inversion"}));
        add_tolerances(rp);

        auto* rn = leaf(check->add_subcommand("reflection-negative", "psi negative definite on the line and the semigroup"),
                        "check reflection-negative", [this] {
                            const auto v = check_reflection_negative(psi_.build(), grid(), tol());
                            return Outcome{json(v), v.pass};
                        });
        add_psi(rn);
        grid_opt(rn);
        add_tolerances(rn);

        auto* bern = leaf(check->add_subcommand("bernstein", "Alternating finite differences of psi on a positive grid"),
                          "check bernstein", [this] {
                              const auto r = check_bernstein(psi_.build(), grid(), bern_);
                              return Outcome{json(r), r.pass};
                          });
        add_psi(bern);
        grid_opt(bern);
        bern->add_option("--step", bern_.h, "Difference step (<= 0: min spacing / 10)");
        bern->add_option("--k-max", bern_.k_max, "Highest difference order")->check(CLI::PositiveNumber);
        bern->add_option("--bernstein-tol", bern_.tol, "Relative tolerance");

        auto* sch = leaf(check->add_subcommand("schoenberg", "PSD of exp(-lambda psi) on the line and the semigroup"),
                         "check schoenberg", [this] {
                             const auto lambdas = parse_vector(lambdas_, "--lambdas");
                             const auto verdicts = schoenberg_bridge(psi_.build(), lambdas, grid(), tol());
                             bool pass = true;
                             for (const auto& v : verdicts)
                                 pass = pass && v.pass;
                             return Outcome{json{{"pass", pass}, {"verdicts", verdicts}}, pass};
                         });
        add_psi(sch);
        grid_opt(sch);
        sch->add_option("--lambdas", lambdas_, "Comma list of positive rates");
        add_tolerances(sch);
    }

    void build_quotient()
    {
        auto* q = leaf(app_.add_subcommand("quotient", "OS quotient of a reflected kernel and induced contractions"),
                       "quotient", [this] {
                           const auto kernel = kernel_.build();
                           const ReflectionSetup setup(parse_reflection(reflection_), grid());
                           json result;
                           bool pass = true;
                           try {
                               result = json(os_quotient(reflected_gram(kernel, setup), tol()));
                               result["reflection_positive"] = true;
                           } catch (const NotReflectionPositive& e) {
                               return Outcome{json{{"reflection_positive", false},
                                                   {"min_eigenvalue", e.min_eigenvalue()},
                                                   {"error", e.what()}},
                                              false};
                           }
                           if (!shifts_.empty()) {
                               json contractions = json::array();
                               for (double s : parse_vector(shifts_, "--shift")) {
                                   json c = hat_contraction(kernel, setup, s, tol());
                                   c["shift"] = s;
                                   pass = pass && c.at("contraction").get<bool>();
                                   contractions.push_back(std::move(c));
                               }
                               result["contractions"] = std::move(contractions);
                           }
                           result["pass"] = pass;
                           return Outcome{result, pass};
                       });
        add_kernel(q);
        q->add_option("--grid", grid_, "Positive part of the grid")->required();
        q->add_option("--reflection", reflection_, "negation or inversion")->check(CLI::IsMember({"negation", "inversion"}));
        q->add_option("--shift", shifts_, "Comma list of positive shifts for the induced contraction");
        add_tolerances(q);
    }

    void build_simulate()
    {
        auto* s = leaf(app_.add_subcommand("simulate", "Sample Gaussian paths on a grid"), "simulate", [this] {
            const auto p = build_process(process_, hurst_);
            const auto g = grid();
            if (!seed_)
                throw DomainError("--seed is required");
            if (paths_ < 1)
                throw DomainError("--paths must be >= 1");
            const auto e = sample_paths(p, g, static_cast<std::size_t>(paths_), RandomSeed{*seed_});
            json result = ensemble_sidecar(e);
            bool pass = true;
            if (validate_) {
                if (e.paths.rows() < 2)
                    throw DomainError("--validate needs at least 2 paths");
                const auto cov = empirical_covariance(e);
                const double bound = validate_tol_;
                json v{{"max_abs_deviation", cov.max_abs_deviation}, {"tolerance", bound}};
                v["covariance_pass"] = cov.max_abs_deviation <= bound;
                pass = cov.max_abs_deviation <= bound;
                if (g.size() >= 2 && !std::holds_alternative<process::NormalizedOneSided>(p.variant) &&
                    !std::holds_alternative<process::BrownianOneSided>(p.variant)) {
                    const auto st = check_stationary_increments(p, g);
                    v["stationary_increments"] = st;
                    pass = pass && st.pass;
                }
                if (std::holds_alternative<process::NormalizedOneSided>(p.variant)) {
                    const std::vector<double> scales{0.5, 2.0};
                    const auto dil = check_dilation_stationarity(g, scales);
                    v["dilation_stationarity"] = dil;
                    pass = pass && dil.pass;
                }
                v["pass"] = pass;
                result["validation"] = v;
            }
            if (!out_.empty()) {
                std::ofstream csv(out_);
                if (!csv)
                    throw DomainError("cannot open " + out_);
                write_paths_csv(e, csv);
                std::ofstream side(out_ + ".json");
                side << canonical_dump(ensemble_sidecar(e)) << '\n';
                result["paths_file"] = out_;
            }
            csv_writer_ = [e](std::ostream& os) { write_paths_csv(e, os); };
            return Outcome{result, pass};
        });
        s->add_option("--process", process_, "Process")->check(CLI::IsMember({"bm2", "fbm", "bm1", "normalized1"}));
        s->add_option("--hurst", hurst_, "Hurst index for fbm");
        s->add_option("--grid", grid_, "start:stop:step or comma list")->required();
        s->add_option("--paths", paths_, "Number of paths");
        s->add_option("--seed", seed_, "64-bit seed (required)")->required();
        s->add_option("--out", out_, "Write paths CSV here and the sidecar to <out>.json");
        s->add_flag("--validate", validate_, "Compare the empirical covariance with the target");
        s->add_option("--validate-tol", validate_tol_, "Max entrywise covariance deviation accepted by --validate");
    }

    void build_lk()
    {
        auto* lk = app_.add_subcommand("lk", "Levy-Khintchine evaluation and fitting");
        lk->require_subcommand(1);

        auto* ev = leaf(lk->add_subcommand("eval", "Evaluate a + b|t| + sum w (1 - exp(-lambda |t|))"), "lk eval", [this] {
            const auto t = PsiOpts::parse_triple(psi_.triple);
            t.validate();
            const auto g = grid();
            std::vector<double> values;
            for (double x : g)
                values.push_back(lk_eval(t, x));
            csv_writer_ = [g, values](std::ostream& os) {
                os << "t,psi\n";
                for (std::size_t i = 0; i < values.size(); ++i)
                    os << canonical_dump(g[i]) << ',' << canonical_dump(values[i]) << '\n';
            };
            return Outcome{json{{"t", std::vector<double>(g.begin(), g.end())}, {"psi", values}, {"triple", t}}, true};
        });
        ev->add_option("--triple", psi_.triple, "LK triple as JSON, or @file")->required();
        ev->add_option("--grid", grid_, "Evaluation points")->required();

        auto* fit = leaf(lk->add_subcommand("fit", "Nonnegative least-squares fit of an LK triple"), "lk fit", [this] {
            PsiSamples samples;
            if (!samples_.empty()) {
                samples = read_psi_csv_file(samples_);
            } else {
                if (grid_.empty())
                    throw DomainError("lk fit needs --samples or --psi with --grid");
                const auto p = psi_.build();
                for (double x : grid()) {
                    samples.t.push_back(x);
                    samples.psi.push_back(eval_psi(p, x));
                }
            }
            std::vector<double> lambdas;
            if (!lambda_grid_.empty())
                lambdas = parse_vector(lambda_grid_, "--lambda-grid");
            else if (!lambda_logspace_.empty())
                lambdas = parse_logspace(lambda_logspace_);
            else
                throw DomainError("lk fit needs --lambda-grid or --lambda-logspace");
            LKFitOptions opts;
            opts.include_a = !no_a_;
            opts.include_b = !no_b_;
            const auto f = lk_fit(samples.t, samples.psi, lambdas, opts);
            json result = f;
            const bool pass = f.converged && f.residual <= max_residual_;
            result["pass"] = pass;
            result["max_residual"] = max_residual_;
            return Outcome{result, pass};
        });
        fit->add_option("--samples", samples_, "Two-column CSV (t, psi)");
        add_psi(fit);
        fit->add_option("--grid", grid_, "Sample points when psi is given in closed form");
        fit->add_option("--lambda-grid", lambda_grid_, "Comma list of rates");
        fit->add_option("--lambda-logspace", lambda_logspace_, "lo,hi,n log-spaced rates");
        fit->add_flag("--no-a", no_a_, "Drop the constant column");
        fit->add_flag("--no-b", no_b_, "Drop the linear column");
        fit->add_option("--max-residual", max_residual_, "Fail when the l2 residual exceeds this");
    }

    void build_mc()
    {
        auto* mc = app_.add_subcommand("mc", "Monte Carlo identities of the canonical Gaussian process");
        mc->require_subcommand(1);

        auto* ch = leaf(mc->add_subcommand("characteristic", "E exp(i phi(v)) against exp(-|v|^2/2)"), "mc characteristic", [this] {
            if (!mc_seed_)
                throw DomainError("--seed is required");
            const auto v = parse_vector(v_, "--v");
            const auto r = mc_characteristic(v, samples_n_, RandomSeed{*mc_seed_});
            json result = r;
            if (!w_.empty()) {
                const auto c = mc_field_covariance(v, parse_vector(w_, "--w"), samples_n_, RandomSeed{*mc_seed_});
                result["field_covariance"] = c;
                return Outcome{result, r.pass() && c.pass()};
            }
            return Outcome{result, r.pass()};
        });
        ch->add_option("--v", v_, "Comma list")->required();
        ch->add_option("--w", w_, "Optional second vector for E phi(v) phi(w)");
        ch->add_option("--samples", samples_n_, "Number of samples")->check(CLI::PositiveNumber);
        ch->add_option("--seed", mc_seed_, "64-bit seed (required)")->required();

        auto* fock = leaf(mc->add_subcommand("fock", "Fock kernel and normalized field"), "mc fock", [this] {
            if (!mc_seed_)
                throw DomainError("--seed is required");
            const auto r = mc_fock_kernel(parse_vector(v_, "--v"), parse_vector(w_, "--w"), samples_n_, RandomSeed{*mc_seed_});
            return Outcome{json(r), r.kernel.pass() && r.normalized.pass()};
        });
        fock->add_option("--v", v_, "Comma list")->required();
        fock->add_option("--w", w_, "Comma list")->required();
        fock->add_option("--samples", samples_n_, "Number of samples")->check(CLI::PositiveNumber);
        fock->add_option("--seed", mc_seed_, "64-bit seed (required)")->required();
    }

    void build_cocycle()
    {
        auto* c = leaf(app_.add_subcommand("cocycle", "Exact cocycle identity and psi/C duality for a pair (s, t)"), "cocycle", [this] {
            const auto kind = cocycle_kind_ == "onesided" ? CocycleKind::OneSidedIndicator : CocycleKind::Brownian;
            const auto id = check_cocycle_identity(kind, s_, t_, exact_tol_);
            const auto du = check_duality(kind, s_, t_, exact_tol_);
            const bool pass = id.pass && du.pass;
            return Outcome{json{{"pass", pass},
                                {"cocycle_identity", id},
                                {"duality", du},
                                {"psi_s", psi_of(kind, s_)},
                                {"psi_t", psi_of(kind, t_)}},
                           pass};
        });
        c->add_option("--cocycle", cocycle_kind_, "brownian or onesided")->check(CLI::IsMember({"brownian", "onesided"}));
        c->add_option("--s", s_, "First group element")->required();
        c->add_option("--t", t_, "Second group element")->required();
        c->add_option("--exact-tol", exact_tol_, "L2 distance accepted as exact");
    }

    ToleranceConfig tol() const { return tolerance_from(tol_.psd_tol, tol_.nd_tol, tol_.rank_tol, tol_.recon_tol); }

    CLI::App app_{"Reflection positivity toolkit", "rpkit"};
    const CLI::App* leaf_ = nullptr;
    std::string command_name_;
    std::function<Outcome()> action_;
    std::function<void(std::ostream&)> csv_writer_;

    int threads_ = 0;
    std::string config_;
    std::string format_ = "json";
    std::string output_;

    ToleranceConfig tol_;
    KernelOpts kernel_;
    PsiOpts psi_;
    std::string grid_;
    std::string reflection_ = "negation";
    std::string nd_source_ = "psi";
    BernsteinOptions bern_;
    std::string lambdas_ = "0.1,1,10";
    std::string shifts_;

    std::string process_ = "bm2";
    double hurst_ = 0.5;
    long long paths_ = 1000;
    std::optional<std::uint64_t> seed_;
    std::string out_;
    bool validate_ = false;
    double validate_tol_ = 0.05;

    std::string samples_;
    std::string lambda_grid_;
    std::string lambda_logspace_;
    bool no_a_ = false;
    bool no_b_ = false;
    double max_residual_ = 1e-3;

    std::string v_;
    std::string w_;
    std::size_t samples_n_ = 1'000'000;
    std::optional<std::uint64_t> mc_seed_;

    std::string cocycle_kind_ = "brownian";
    double s_ = 0.0;
    double t_ = 0.0;
    double exact_tol_ = 1e-14;
};

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Driver driver;
    return driver.run(args, out, err);
}

} // namespace rpkit::cli
