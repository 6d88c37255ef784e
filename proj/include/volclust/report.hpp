#pragma once

#include "volclust/entropy.hpp"
#include "volclust/estimate.hpp"
#include "volclust/manifest.hpp"
#include "volclust/series.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace volclust {

/// Six significant digits, as printed in text reports.
[[nodiscard]] std::string format_sig6(double v);

struct FitCell {
    std::optional<FitResult> result;
    std::string error;  // set when the fit threw
};

/// Grid of fits: cells[family][series].
struct FitTable {
    std::vector<std::string> series;
    std::vector<ModelFamily> families;
    std::vector<std::vector<FitCell>> cells;

    [[nodiscard]] bool all_converged() const noexcept;
};

/// Row blocks omega, alpha, beta, d, nu, Log-L; one row per series inside a
/// block; one column per family. Stars mark 1% (**) and 5% (*) significance.
[[nodiscard]] std::string render_fit_text(const FitTable& table, const RunManifest& manifest);
[[nodiscard]] nlohmann::ordered_json render_fit_tree(const FitTable& table, const RunManifest& manifest);

struct EntropyTable {
    std::vector<std::string> series;
    std::vector<EntropyReport> reports;  // parallel to series
    bool bits = false;                   // Shannon and Renyi shown in bits
};

/// Rows Shannon, Renyi x alpha grid, Tsallis x q grid; one column per series.
[[nodiscard]] std::string render_entropy_text(const EntropyTable& table, const RunManifest& manifest);
[[nodiscard]] nlohmann::ordered_json render_entropy_tree(const EntropyTable& table,
                                                         const RunManifest& manifest);

struct WindowSeries {
    std::string id;
    std::vector<Date> dates;
    std::vector<WindowEntropy> windows;
};

[[nodiscard]] std::string render_windows_text(const std::vector<WindowSeries>& series, bool bits,
                                              const RunManifest& manifest);
[[nodiscard]] nlohmann::ordered_json render_windows_tree(const std::vector<WindowSeries>& series,
                                                         bool bits, const RunManifest& manifest);

}  // namespace volclust
