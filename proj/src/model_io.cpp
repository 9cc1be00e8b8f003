// This file is part of tsvar, a library for robust statistical evaluation
// of long-memory supOU processes under reversion-measure ambiguity.
//
// SPDX-License-Identifier: MIT

#include "tsvar/model_io.hpp"

#include <fstream>

#include <json.hpp>

namespace tsvar {

using nlohmann::json;

ModelFile model_from_report(const FitReport& report, std::string station,
                            std::string record_span) {
    return ModelFile{report.model, std::move(station), std::move(record_span),
                     report.acf_lag_cutoff, report.residuals, report.objective_value};
}

std::string serialize_model(const ModelFile& mf) {
    json j;
    j["format_version"] = ModelFile::current_format_version;
    j["station"] = mf.station;
    j["record_span"] = mf.record_span;
    j["parameters"] = {{"alpha", mf.model.reversion.alpha},
                       {"beta", mf.model.reversion.beta},
                       {"A", mf.model.levy.intensity},
                       {"B", mf.model.levy.tempering},
                       {"C", mf.model.levy.stability},
                       {"shift", mf.model.shift}};
    if (mf.acf_lag_cutoff || mf.fit_residuals || mf.objective_value) {
        json fit;
        if (mf.acf_lag_cutoff) fit["acf_lag_cutoff"] = *mf.acf_lag_cutoff;
        if (mf.fit_residuals) {
            const auto& r = *mf.fit_residuals;
            fit["residuals"] = {{"mean", r[0]}, {"variance", r[1]},
                                {"skewness", r[2]}, {"kurtosis", r[3]}};
        }
        if (mf.objective_value) fit["objective_value"] = *mf.objective_value;
        j["fit"] = std::move(fit);
    }
    return j.dump(2) + "\n";
}

ModelFile parse_model(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        const int version = j.at("format_version").get<int>();
        if (version != ModelFile::current_format_version)
            throw ParseError("unsupported model format_version " + std::to_string(version));
        const json& p = j.at("parameters");
        // the type constructors re-validate every invariant
        SupOUModel model(GammaReversionMeasure(p.at("alpha").get<double>(),
                                               p.at("beta").get<double>()),
                         TemperedStableLevy(p.at("A").get<double>(), p.at("B").get<double>(),
                                            p.at("C").get<double>()),
                         p.at("shift").get<double>());
        ModelFile mf{model, j.value("station", std::string{}),
                     j.value("record_span", std::string{}), std::nullopt, std::nullopt,
                     std::nullopt};
        if (j.contains("fit")) {
            const json& fit = j["fit"];
            if (fit.contains("acf_lag_cutoff"))
                mf.acf_lag_cutoff = fit["acf_lag_cutoff"].get<std::size_t>();
            if (fit.contains("residuals")) {
                const json& r = fit["residuals"];
                mf.fit_residuals = {r.at("mean").get<double>(), r.at("variance").get<double>(),
                                    r.at("skewness").get<double>(),
                                    r.at("kurtosis").get<double>()};
            }
            if (fit.contains("objective_value"))
                mf.objective_value = fit["objective_value"].get<double>();
        }
        return mf;
    } catch (const json::exception& e) {
        throw ParseError(std::string("model file is missing required fields: ") + e.what());
    }
}

void save_model(const ModelFile& mf, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out << serialize_model(mf);
    if (!out)
        throw IoError("failed writing " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open model file " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_model(text);
}

}  // namespace tsvar
