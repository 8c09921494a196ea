#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mcf/cells.hpp"
#include "mcf/certify.hpp"
#include "mcf/ergodic.hpp"
#include "mcf/scalar.hpp"

namespace mcf {

inline constexpr int schema_version = 1;

using Json = nlohmann::ordered_json;

inline std::string to_string(const BigInt& v) { return v.get_str(); }
inline std::string to_string(const Rational& v) { return v.get_str(); }

/// {n, digits, vertices}: vertices row-major over the column matrix
/// [A_0 | ... | A_n], big integers as decimal strings.
inline Json cell_to_json(const Cell& c) {
    Json j;
    j["schema"] = schema_version;
    j["n"] = c.n;
    j["digits"] = c.digits;
    Json rows = Json::array();
    for (int r = 0; r <= c.n; ++r) {
        Json row = Json::array();
        for (int i = 0; i <= c.n; ++i) row.push_back(c.cols[i][r].get_str());
        rows.push_back(std::move(row));
    }
    j["vertices"] = std::move(rows);
    return j;
}

inline Cell cell_from_json(const Json& j) {
    Cell c;
    c.n = j.at("n").get<int>();
    c.digits = j.at("digits").get<std::vector<long long>>();
    const auto& rows = j.at("vertices");
    if (static_cast<int>(rows.size()) != c.n + 1)
        throw ParseError("vertex matrix must have n+1 rows");
    c.cols.assign(c.n + 1, std::vector<BigInt>(c.n + 1));
    for (int r = 0; r <= c.n; ++r) {
        if (static_cast<int>(rows[r].size()) != c.n + 1)
            throw ParseError("vertex matrix must be square");
        for (int i = 0; i <= c.n; ++i)
            c.cols[i][r] = BigInt(rows[r][i].get<std::string>());
    }
    return c;
}

inline Json certificate_to_json(const AlgebraicCertificate& cert) {
    Json j;
    j["schema"] = schema_version;
    j["n"] = cert.n;
    j["period"] = cert.period;
    Json rows = Json::array();
    for (int r = 0; r < cert.matrix.dim; ++r) {
        Json row = Json::array();
        for (int c = 0; c < cert.matrix.dim; ++c) row.push_back(cert.matrix.at(r, c).get_str());
        rows.push_back(std::move(row));
    }
    j["matrix"] = std::move(rows);
    auto poly = [](const std::vector<BigInt>& p) {
        Json out = Json::array();
        for (const BigInt& c : p) out.push_back(c.get_str());
        return out;
    };
    j["charpoly"] = poly(cert.charpoly);                 // lowest degree first
    j["reciprocal_poly"] = poly(cert.reciprocal_poly);   // satisfied by alpha_1
    j["dominant_eigenvalue"] = cert.dominant_eigenvalue;
    j["dominant_root"] = cert.dominant_root;
    j["candidate_point"] = cert.candidate_point;
    j["eigen_residual"] = cert.eigen_residual;
    j["replay_ok"] = cert.replay_ok;
    j["replay_periods"] = cert.replay_periods;
    return j;
}

inline Json report_to_json(const ErgodicReport& r) {
    Json j;
    j["schema"] = schema_version;
    j["n"] = r.n;
    j["flavor"] = (r.flavor == Flavor::Fast) ? "fast" : "slow";
    j["sample_count"] = r.samples;
    j["orbit_length"] = r.orbit_length;
    j["seed"] = r.seed;
    j["workers"] = r.workers;
    j["bound"] = r.bound;
    j["block_length"] = r.block_length;
    Json hist = Json::object();
    for (const auto& [d, f] : r.digit_histogram()) hist[std::to_string(d)] = f;
    j["digit_histogram"] = std::move(hist);
    j["total_digits"] = r.total_digits;
    j["zero_block_hit_fraction"] = r.zero_block_hit_fraction;
    j["window_count"] = r.window_count;
    j["window_qualifying"] = r.window_qualifying;
    j["window_rate"] = r.window_rate;
    j["measure_ratio_bound"] = r.measure_ratio_bound;
    Json jumps = Json::object();
    for (const auto& [k, c] : r.jump_length_counts) jumps[std::to_string(k)] = c;
    j["jump_length_histogram"] = std::move(jumps);
    j["no_jump_count"] = r.no_jump_count;
    j["terminated_orbits"] = r.terminated_orbits;
    Json birk = Json::array();
    for (const auto& e : r.birkhoff_estimates)
        birk.push_back({{"region", e.region},
                        {"time_average", e.time_average},
                        {"space_average", e.space_average},
                        {"abs_error", e.abs_error}});
    j["birkhoff_estimates"] = std::move(birk);
    return j;
}

/// Digit histogram as plot-ready CSV.
inline std::string report_to_csv(const ErgodicReport& r) {
    std::string out = "digit,count,frequency\n";
    const auto hist = r.digit_histogram();
    for (const auto& [d, c] : r.digit_counts) {
        out += std::to_string(d);
        out += ',';
        out += std::to_string(c);
        out += ',';
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", hist.at(d));
        out += buf;
        out += '\n';
    }
    return out;
}

} // namespace mcf
