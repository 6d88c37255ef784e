// volclust: fit GARCH/IGARCH/FIGARCH models, simulate them, and tabulate
// histogram entropies of return series.

#include "volclust/entropy.hpp"
#include "volclust/errors.hpp"
#include "volclust/estimate.hpp"
#include "volclust/manifest.hpp"
#include "volclust/report.hpp"
#include "volclust/series.hpp"
#include "volclust/simulate.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace {

using namespace volclust;

struct GlobalOptions {
    std::vector<std::string> inputs;
    std::string format = "text";
    std::uint64_t seed = 1;
    std::string date_col = "date";
    std::string price_col;  // defaults to "close", or "return" with --returns
    bool returns = false;
};

struct LoadedSeries {
    ReturnSeries series;
    InputDigest digest;
};

/// Exit code 1: bad input or arguments.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string join(const std::vector<std::string>& v, char sep = ',') {
    std::string out;
    for (const auto& s : v) out += (out.empty() ? "" : std::string(1, sep)) + s;
    return out;
}

std::string join(const std::vector<double>& v) {
    std::vector<std::string> s;
    for (double x : v) s.push_back(format_sig6(x));
    return join(s);
}

std::vector<LoadedSeries> load_inputs(const GlobalOptions& g) {
    if (g.inputs.empty()) throw UsageError("--input is required");
    ColumnMapping mapping{g.date_col, g.price_col.empty() ? (g.returns ? "return" : "close") : g.price_col};
    std::vector<LoadedSeries> out;
    for (const auto& path : g.inputs) {
        std::string content;
        std::string id;
        if (path == "-") {
            content.assign(std::istreambuf_iterator<char>(std::cin), {});
            id = "stdin";
        } else {
            std::ifstream in(path, std::ios::binary);
            if (!in) throw UsageError("cannot open '" + path + "'");
            content.assign(std::istreambuf_iterator<char>(in), {});
            id = std::filesystem::path(path).stem().string();
        }
        std::istringstream stream(content);
        try {
            ReturnSeries s = g.returns ? parse_returns(stream, mapping, id, path)
                                       : to_log_returns(parse_prices(stream, mapping), id, path);
            out.push_back({std::move(s), {path, sha256_hex(content)}});
        } catch (const Error& e) {
            throw UsageError(path + ": " + e.what());
        }
    }
    return out;
}

RunManifest base_manifest(const std::string& command, const GlobalOptions& g,
                          const std::vector<LoadedSeries>& inputs) {
    RunManifest m;
    m.command = command;
    m.seed = g.seed;
    for (const auto& in : inputs) m.inputs.push_back(in.digest);
    m.set("format", g.format);
    m.set("date-col", g.date_col);
    m.set("price-col", g.price_col.empty() ? (g.returns ? "return" : "close") : g.price_col);
    m.set("returns", g.returns ? "true" : "false");
    return m;
}

void emit(std::ostream& out, const GlobalOptions& g, const std::string& text, const nlohmann::ordered_json& tree) {
    if (g.format == "tree")
        out << tree.dump(2) << '\n';
    else
        out << text;
}

// ---------------------------------------------------------------------------

struct FitOptions {
    std::vector<std::string> families{"garch", "igarch", "figarch"};
    std::string innovation = "student";
    std::size_t truncation = kDefaultTruncation;
    int restarts = 2;
    int max_iters = 2000;
    double tol = 1e-6;
    std::optional<double> d_fixed;
};

int run_fit(const GlobalOptions& g, const FitOptions& o) {
    std::vector<ModelFamily> families;
    for (const auto& f : o.families) {
        try {
            families.push_back(parse_family(f));
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
    }
    if (o.d_fixed) {
        if (*o.d_fixed == 1.0) throw UsageError("--d-fixed 1 requests IGARCH; use --family igarch");
        if (*o.d_fixed == 0.0) throw UsageError("--d-fixed 0 requests GARCH; use --family garch");
        if (!(*o.d_fixed > 0.0 && *o.d_fixed < 1.0)) throw UsageError("d must lie in [0,1]");
        for (auto f : families)
            if (f != ModelFamily::FIGARCH) throw UsageError("--d-fixed applies to --family figarch only");
    }

    const auto inputs = load_inputs(g);
    RunManifest m = base_manifest("fit", g, inputs);
    m.set("family", join(o.families));
    m.set("innovation", o.innovation);
    m.set("truncation", std::to_string(o.truncation));
    m.set("restarts", std::to_string(o.restarts));
    m.set("max-iters", std::to_string(o.max_iters));
    m.set("tol", format_sig6(o.tol));
    if (o.d_fixed) m.set("d-fixed", format_sig6(*o.d_fixed));

    FitTable table;
    table.families = families;
    for (const auto& in : inputs) table.series.push_back(in.series.id);
    for (auto family : families) {
        FitConfig cfg;
        cfg.family = family;
        cfg.innovation = o.innovation == "gaussian" ? Innovation::Gaussian : Innovation::StudentT;
        cfg.truncation = o.truncation;
        cfg.restarts = o.restarts;
        cfg.max_iters = o.max_iters;
        cfg.tol = o.tol;
        cfg.seed = g.seed;
        cfg.fixed_d = o.d_fixed;
        auto& row = table.cells.emplace_back();
        for (const auto& in : inputs) {
            FitCell cell;
            try {
                cell.result = fit(in.series, cfg);
            } catch (const InsufficientDataError& e) {
                throw UsageError(in.digest.path + ": " + e.what());
            } catch (const Error& e) {
                cell.error = e.what();
            }
            row.push_back(std::move(cell));
        }
    }
    emit(std::cout, g, render_fit_text(table, m), render_fit_tree(table, m));
    return table.all_converged() ? 0 : 2;
}

// ---------------------------------------------------------------------------

struct EntropyOptions {
    std::optional<std::size_t> bins;
    std::vector<double> alpha = kDefaultEntropyGrid;
    std::vector<double> q = kDefaultEntropyGrid;
    bool bits = false;
    std::optional<std::size_t> window;
    std::optional<std::size_t> step;
};

int run_entropy(const GlobalOptions& g, const EntropyOptions& o) {
    if (o.step && !o.window) throw UsageError("--step requires --window");
    const auto inputs = load_inputs(g);
    RunManifest m = base_manifest("entropy", g, inputs);
    m.set("bins", o.bins ? std::to_string(*o.bins) : "auto");
    m.set("alpha", join(o.alpha));
    m.set("q", join(o.q));
    m.set("bits", o.bits ? "true" : "false");
    if (o.window) {
        m.set("window", std::to_string(*o.window));
        m.set("step", std::to_string(o.step.value_or(*o.window)));
    }

    try {
        if (o.window) {
            std::vector<WindowSeries> ws;
            for (const auto& in : inputs) {
                ws.push_back({in.series.id, in.series.dates,
                              windowed_entropy(in.series.returns, *o.window, o.step.value_or(*o.window),
                                               o.bins, o.alpha, o.q)});
            }
            emit(std::cout, g, render_windows_text(ws, o.bits, m), render_windows_tree(ws, o.bits, m));
            return 0;
        }
        EntropyTable table;
        table.bits = o.bits;
        for (const auto& in : inputs) {
            table.series.push_back(in.series.id);
            table.reports.push_back(entropy_report(in.series.returns, o.bins, o.alpha, o.q));
        }
        std::vector<std::string> warned;
        for (const auto& rep : table.reports)
            for (const auto& w : rep.warnings)
                if (std::find(warned.begin(), warned.end(), w) == warned.end()) {
                    std::cerr << "warning: " << w << '\n';
                    warned.push_back(w);
                }
        emit(std::cout, g, render_entropy_text(table, m), render_entropy_tree(table, m));
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct SimulateOptions {
    std::string family = "garch";
    double omega = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    std::optional<double> d;
    std::optional<double> nu;
    std::size_t n = 1000;
    std::size_t burn_in = 2000;
    std::size_t truncation = kDefaultTruncation;
    std::string output;
};

int run_simulate(const GlobalOptions& g, const SimulateOptions& o) {
    SimConfig cfg;
    try {
        cfg.family = parse_family(o.family);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    if (cfg.family == ModelFamily::FIGARCH && !o.d) throw UsageError("--family figarch needs --d");
    if (cfg.family != ModelFamily::FIGARCH && o.d)
        throw UsageError("--d applies to --family figarch only");
    cfg.params = {o.omega, o.alpha, o.beta,
                  cfg.family == ModelFamily::GARCH ? 0.0 : cfg.family == ModelFamily::IGARCH ? 1.0 : *o.d,
                  o.nu};
    cfg.n = o.n;
    cfg.burn_in = o.burn_in;
    cfg.truncation = o.truncation;
    cfg.seed = g.seed;
    if (cfg.n < 1) throw UsageError("--n must be >= 1");

    RunManifest m;
    m.command = "simulate";
    m.seed = g.seed;
    m.set("family", o.family);
    m.set("omega", format_sig6(o.omega));
    m.set("alpha", format_sig6(o.alpha));
    m.set("beta", format_sig6(o.beta));
    if (o.d) m.set("d", format_sig6(*o.d));
    m.set("innovation", o.nu ? "student" : "gaussian");
    if (o.nu) m.set("nu", format_sig6(*o.nu));
    m.set("n", std::to_string(o.n));
    m.set("burn-in", std::to_string(o.burn_in));
    m.set("truncation", std::to_string(o.truncation));
    m.set("output", o.output.empty() ? "-" : o.output);

    SimResult sim;
    try {
        sim = simulate_path(cfg);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }

    std::ostream* manifest_out = &std::cout;
    if (o.output.empty() || o.output == "-") {
        write_returns(std::cout, sim.series);
        manifest_out = &std::cerr;
    } else {
        std::ofstream out(o.output, std::ios::binary);
        if (!out) throw UsageError("cannot write '" + o.output + "'");
        write_returns(out, sim.series);
    }
    if (g.format == "tree")
        *manifest_out << nlohmann::ordered_json{{"report", "simulate"}, {"manifest", to_json(m)}}.dump(2) << '\n';
    else
        *manifest_out << to_text(m);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Volatility models (GARCH, IGARCH, FIGARCH) and histogram entropies of return series"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--input", g.inputs, "Input file(s), comma separated; '-' reads stdin")->delimiter(',');
    app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"text", "tree"}));
    app.add_option("--seed", g.seed, "Random seed");
    app.add_option("--date-col", g.date_col, "Date column name");
    app.add_option("--price-col", g.price_col, "Value column name (default close, or return with --returns)");
    app.add_flag("--returns", g.returns, "Input already holds returns");

    FitOptions fo;
    auto* fit_cmd = app.add_subcommand("fit", "Maximum-likelihood fit of volatility models");
    fit_cmd->add_option("--family", fo.families, "garch,igarch,figarch")->delimiter(',');
    fit_cmd->add_option("--innovation", fo.innovation, "Innovation law")
        ->check(CLI::IsMember({"gaussian", "student"}));
    fit_cmd->add_option("--truncation", fo.truncation, "ARCH(inf) truncation lags")->check(CLI::PositiveNumber);
    fit_cmd->add_option("--restarts", fo.restarts, "Jittered restarts")->check(CLI::NonNegativeNumber);
    fit_cmd->add_option("--max-iters", fo.max_iters, "Simplex iteration cap")->check(CLI::PositiveNumber);
    fit_cmd->add_option("--tol", fo.tol, "Objective convergence tolerance")->check(CLI::PositiveNumber);
    fit_cmd->add_option("--d-fixed", fo.d_fixed, "FIGARCH: hold d fixed in (0,1)");

    EntropyOptions eo;
    auto* ent_cmd = app.add_subcommand("entropy", "Shannon, Renyi and Tsallis entropies");
    ent_cmd->add_option("--bins", eo.bins, "Histogram cells (default ceil(sqrt(n)))")->check(CLI::PositiveNumber);
    ent_cmd->add_option("--alpha", eo.alpha, "Renyi orders")->delimiter(',');
    ent_cmd->add_option("--q", eo.q, "Tsallis indices")->delimiter(',');
    ent_cmd->add_flag("--bits", eo.bits, "Show Shannon and Renyi in bits");
    ent_cmd->add_option("--window", eo.window, "Window length for rolling entropies")->check(CLI::PositiveNumber);
    ent_cmd->add_option("--step", eo.step, "Window step")->check(CLI::PositiveNumber);

    SimulateOptions so;
    auto* sim_cmd = app.add_subcommand("simulate", "Simulate a volatility process");
    sim_cmd->add_option("--family", so.family, "garch, igarch or figarch");
    sim_cmd->add_option("--omega", so.omega, "Variance intercept")->required();
    sim_cmd->add_option("--alpha", so.alpha, "ARCH coefficient");
    sim_cmd->add_option("--beta", so.beta, "GARCH coefficient");
    sim_cmd->add_option("--d", so.d, "Fractional difference parameter (figarch)");
    sim_cmd->add_option("--nu", so.nu, "Student-t degrees of freedom (omit for Gaussian)");
    sim_cmd->add_option("--n", so.n, "Observations to emit");
    sim_cmd->add_option("--burn-in", so.burn_in, "Discarded prefix");
    sim_cmd->add_option("--truncation", so.truncation, "ARCH(inf) truncation lags")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--output", so.output, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*fit_cmd) return run_fit(g, fo);
        if (*ent_cmd) return run_entropy(g, eo);
        if (*sim_cmd) return run_simulate(g, so);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
