// This file is part of tsvar, a library for robust statistical evaluation
// of long-memory supOU processes under reversion-measure ambiguity.
//
// SPDX-License-Identifier: MIT

#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>

#include "tsvar/identify.hpp"
#include "tsvar/supou.hpp"

namespace tsvar {

/**
 * On-disk model document: the fitted supOU parameters plus fit metadata.
 *
 * Serialized as JSON with a format_version field; numbers round-trip
 * losslessly (shortest-exact encoding), and save -> load -> save is
 * byte-identical. Model invariants are re-validated on load.
 */
struct ModelFile {
    static constexpr int current_format_version = 1;

    SupOUModel model;
    std::string station;
    std::string record_span;
    std::optional<std::size_t> acf_lag_cutoff;
    std::optional<std::array<double, 4>> fit_residuals;
    std::optional<double> objective_value;
};

ModelFile model_from_report(const FitReport& report, std::string station,
                            std::string record_span);

std::string serialize_model(const ModelFile& mf);
ModelFile parse_model(const std::string& text);

void save_model(const ModelFile& mf, const std::filesystem::path& path);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace tsvar
