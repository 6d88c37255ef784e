#include "volclust/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace volclust {

namespace {

using Json = nlohmann::ordered_json;

// Left-aligned columns separated by two spaces.
std::string layout(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& r : rows) {
        if (width.size() < r.size()) width.resize(r.size(), 0);
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    std::ostringstream out;
    for (const auto& r : rows) {
        std::string line;
        for (std::size_t i = 0; i < r.size(); ++i) {
            line += r[i];
            if (i + 1 < r.size()) line += std::string(width[i] - r[i].size() + 2, ' ');
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << '\n';
    }
    return out.str();
}

struct CoefRow {
    const char* key;    // coefficient name in FitResult
    const char* label;  // row label
};

constexpr CoefRow kCoefRows[] = {
    {"omega", "omega"}, {"alpha", "alpha"}, {"beta", "beta"}, {"d", "d"}, {"nu", "Student"},
};

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

double unit_scale(bool bits) { return bits ? 1.0 / std::numbers::ln2 : 1.0; }

}  // namespace

std::string format_sig6(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

bool FitTable::all_converged() const noexcept {
    for (const auto& row : cells)
        for (const auto& c : row)
            if (!c.result || !c.result->converged) return false;
    return true;
}

std::string render_fit_text(const FitTable& t, const RunManifest& manifest) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"Coef.", "Series"};
    for (auto f : t.families) header.emplace_back(to_string(f));
    rows.push_back(header);

    auto cell_text = [&](const FitCell& c, const char* key) -> std::string {
        if (!c.result) return "failed";
        const Coefficient* coef = c.result->find(key);
        if (!coef) return "-";
        return format_sig6(coef->value) + std::string(stars(coef->significance));
    };

    for (const auto& row : kCoefRows) {
        for (std::size_t s = 0; s < t.series.size(); ++s) {
            std::vector<std::string> r{s == 0 ? row.label : "", t.series[s]};
            for (std::size_t f = 0; f < t.families.size(); ++f) r.push_back(cell_text(t.cells[f][s], row.key));
            rows.push_back(std::move(r));
        }
    }
    for (std::size_t s = 0; s < t.series.size(); ++s) {
        std::vector<std::string> r{s == 0 ? "Log-L" : "", t.series[s]};
        for (std::size_t f = 0; f < t.families.size(); ++f) {
            const auto& c = t.cells[f][s];
            r.push_back(c.result ? format_sig6(c.result->loglik) : "failed");
        }
        rows.push_back(std::move(r));
    }

    std::ostringstream out;
    out << to_text(manifest);
    out << layout(rows);
    out << "** significant at 1%, * significant at 5%\n";

    std::vector<std::string> notes;
    for (std::size_t f = 0; f < t.families.size(); ++f) {
        for (std::size_t s = 0; s < t.series.size(); ++s) {
            const auto& c = t.cells[f][s];
            const std::string where = std::string(to_string(t.families[f])) + " " + t.series[s] + ": ";
            if (!c.result) {
                notes.push_back(where + "failed: " + c.error);
                continue;
            }
            if (!c.result->converged) notes.push_back(where + "did not converge");
            for (const auto& d : c.result->diagnostics) notes.push_back(where + d);
            if (t.families[f] == ModelFamily::GARCH) {
                const auto pc = persistence_check(*c.result);
                std::string line = where + "alpha + beta = " + format_sig6(pc.sum);
                if (pc.std_error) line += " (se " + format_sig6(*pc.std_error) + ")";
                if (pc.flagged) line += "; " + pc.recommendation;
                notes.push_back(line);
            }
        }
    }
    if (!notes.empty()) {
        out << "\nNotes:\n";
        for (const auto& n : notes) out << "  " << n << '\n';
    }
    return out.str();
}

Json render_fit_tree(const FitTable& t, const RunManifest& manifest) {
    Json j;
    j["report"] = "fit";
    j["manifest"] = to_json(manifest);
    j["series"] = t.series;
    auto& fams = j["families"] = Json::array();
    for (auto f : t.families) fams.push_back(std::string(to_string(f)));

    auto& table = j["table"] = Json::array();
    for (const auto& row : kCoefRows) {
        Json block;
        block["coefficient"] = row.label;
        auto& rows = block["rows"] = Json::array();
        for (std::size_t s = 0; s < t.series.size(); ++s) {
            Json r;
            r["series"] = t.series[s];
            for (std::size_t f = 0; f < t.families.size(); ++f) {
                const auto& c = t.cells[f][s];
                const Coefficient* coef = c.result ? c.result->find(row.key) : nullptr;
                if (!coef) {
                    r[std::string(to_string(t.families[f]))] = nullptr;
                    continue;
                }
                r[std::string(to_string(t.families[f]))] = {
                    {"value", coef->value},
                    {"stderr", optional_number(coef->std_error)},
                    {"pvalue", optional_number(coef->pvalue)},
                    {"stars", std::string(stars(coef->significance))},
                };
            }
            rows.push_back(std::move(r));
        }
        table.push_back(std::move(block));
    }
    {
        Json block;
        block["coefficient"] = "Log-L";
        auto& rows = block["rows"] = Json::array();
        for (std::size_t s = 0; s < t.series.size(); ++s) {
            Json r;
            r["series"] = t.series[s];
            for (std::size_t f = 0; f < t.families.size(); ++f) {
                const auto& c = t.cells[f][s];
                r[std::string(to_string(t.families[f]))] =
                    c.result ? Json{{"value", c.result->loglik}} : Json(nullptr);
            }
            rows.push_back(std::move(r));
        }
        table.push_back(std::move(block));
    }

    auto& fits = j["fits"] = Json::array();
    for (std::size_t f = 0; f < t.families.size(); ++f) {
        for (std::size_t s = 0; s < t.series.size(); ++s) {
            const auto& c = t.cells[f][s];
            Json e;
            e["family"] = std::string(to_string(t.families[f]));
            e["series"] = t.series[s];
            if (!c.result) {
                e["error"] = c.error;
                fits.push_back(std::move(e));
                continue;
            }
            const auto& r = *c.result;
            e["converged"] = r.converged;
            e["iterations"] = r.iterations;
            e["n_obs"] = r.n_obs;
            e["loglik"] = r.loglik;
            e["gradient_norm"] = r.gradient_norm;
            e["start_logliks"] = r.start_objectives;
            e["diagnostics"] = r.diagnostics;
            if (t.families[f] == ModelFamily::GARCH) {
                const auto pc = persistence_check(r);
                e["persistence"] = {{"alpha_plus_beta", pc.sum},
                                    {"stderr", optional_number(pc.std_error)},
                                    {"flagged", pc.flagged},
                                    {"recommendation", pc.recommendation}};
            }
            fits.push_back(std::move(e));
        }
    }
    return j;
}

std::string render_entropy_text(const EntropyTable& t, const RunManifest& manifest) {
    const double scale = unit_scale(t.bits);
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"Entropies", "Index (alpha/q)"};
    for (const auto& s : t.series) header.push_back(s);
    rows.push_back(header);

    std::vector<std::string> r{"Shannon", "-"};
    for (const auto& rep : t.reports) r.push_back(format_sig6(rep.shannon * scale));
    rows.push_back(r);

    auto grid_rows = [&](const char* label, auto member, double factor) {
        if (t.reports.empty()) return;
        const auto& first = t.reports.front().*member;
        for (std::size_t i = 0; i < first.size(); ++i) {
            std::vector<std::string> row{i == 0 ? label : "", format_sig6(first[i].first)};
            for (const auto& rep : t.reports) row.push_back(format_sig6((rep.*member)[i].second * factor));
            rows.push_back(std::move(row));
        }
    };
    grid_rows("Renyi", &EntropyReport::renyi, scale);
    grid_rows("Tsallis", &EntropyReport::tsallis, 1.0);

    std::vector<std::string> bins{"Bins", "-"}, nobs{"N", "-"};
    for (const auto& rep : t.reports) {
        bins.push_back(std::to_string(rep.bins));
        nobs.push_back(std::to_string(rep.n_obs));
    }
    rows.push_back(bins);
    rows.push_back(nobs);

    std::ostringstream out;
    out << to_text(manifest);
    out << layout(rows);
    out << "units: " << (t.bits ? "bits (Shannon, Renyi)" : "nats") << '\n';
    return out.str();
}

Json render_entropy_tree(const EntropyTable& t, const RunManifest& manifest) {
    const double scale = unit_scale(t.bits);
    Json j;
    j["report"] = "entropy";
    j["manifest"] = to_json(manifest);
    j["series"] = t.series;
    j["units"] = t.bits ? "bits" : "nats";
    auto& table = j["table"] = Json::array();
    {
        Json row{{"entropy", "Shannon"}, {"index", nullptr}};
        auto& vals = row["values"] = Json::array();
        for (const auto& rep : t.reports) vals.push_back(rep.shannon * scale);
        table.push_back(std::move(row));
    }
    auto grid = [&](const char* label, auto member, double factor) {
        if (t.reports.empty()) return;
        const auto& first = t.reports.front().*member;
        for (std::size_t i = 0; i < first.size(); ++i) {
            Json row{{"entropy", label}, {"index", first[i].first}};
            auto& vals = row["values"] = Json::array();
            for (const auto& rep : t.reports) vals.push_back((rep.*member)[i].second * factor);
            table.push_back(std::move(row));
        }
    };
    grid("Renyi", &EntropyReport::renyi, scale);
    grid("Tsallis", &EntropyReport::tsallis, 1.0);
    auto& bins = j["bins"] = Json::array();
    auto& nobs = j["n_obs"] = Json::array();
    auto& warn = j["warnings"] = Json::array();
    for (const auto& rep : t.reports) {
        bins.push_back(rep.bins);
        nobs.push_back(rep.n_obs);
        for (const auto& w : rep.warnings) warn.push_back(w);
    }
    return j;
}

std::string render_windows_text(const std::vector<WindowSeries>& series, bool bits,
                                const RunManifest& manifest) {
    const double scale = unit_scale(bits);
    std::vector<std::vector<std::string>> rows;
    if (!series.empty() && !series.front().windows.empty()) {
        const auto& proto = series.front().windows.front().report;
        std::vector<std::string> header{"Series", "Begin", "End", "Shannon"};
        for (const auto& [a, v] : proto.renyi) header.push_back("Renyi(" + format_sig6(a) + ")");
        for (const auto& [q, v] : proto.tsallis) header.push_back("Tsallis(" + format_sig6(q) + ")");
        rows.push_back(header);
    }
    for (const auto& s : series) {
        for (const auto& w : s.windows) {
            std::vector<std::string> r{s.id, format_date(s.dates[w.begin]), format_date(s.dates[w.end - 1]),
                                       format_sig6(w.report.shannon * scale)};
            for (const auto& [a, v] : w.report.renyi) r.push_back(format_sig6(v * scale));
            for (const auto& [q, v] : w.report.tsallis) r.push_back(format_sig6(v));
            rows.push_back(std::move(r));
        }
    }
    std::ostringstream out;
    out << to_text(manifest) << layout(rows);
    out << "units: " << (bits ? "bits (Shannon, Renyi)" : "nats") << '\n';
    return out.str();
}

Json render_windows_tree(const std::vector<WindowSeries>& series, bool bits, const RunManifest& manifest) {
    const double scale = unit_scale(bits);
    Json j;
    j["report"] = "entropy-windows";
    j["manifest"] = to_json(manifest);
    j["units"] = bits ? "bits" : "nats";
    auto& out = j["windows"] = Json::array();
    for (const auto& s : series) {
        for (const auto& w : s.windows) {
            Json e;
            e["series"] = s.id;
            e["begin"] = format_date(s.dates[w.begin]);
            e["end"] = format_date(s.dates[w.end - 1]);
            e["bins"] = w.report.bins;
            e["shannon"] = w.report.shannon * scale;
            auto& r = e["renyi"] = Json::array();
            for (const auto& [a, v] : w.report.renyi) r.push_back({a, v * scale});
            auto& ts = e["tsallis"] = Json::array();
            for (const auto& [q, v] : w.report.tsallis) ts.push_back({q, v});
            out.push_back(std::move(e));
        }
    }
    return j;
}

}  // namespace volclust
