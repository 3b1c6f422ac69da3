#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "lfss/analysis.hpp"
#include "lfss/synthesis.hpp"

namespace lfss {

constexpr int kSidecarSchema = 1;

/// Header t_1..t_N,x_1..x_d; one row per point; 17 significant digits.
void write_field_csv(const std::filesystem::path& path, const FieldSample& field);

/// Reads a file written by write_field_csv (provenance is left empty).
FieldSample read_field_csv(const std::filesystem::path& path);

/// Header j_1,k_1,..,j_N,k_N,value; lattice order, last axis fastest.
void write_coefficients_csv(const std::filesystem::path& path, const CoefficientArray& coeffs);

/// Header x,value.
void write_xy_csv(const std::filesystem::path& path, const std::vector<double>& x, const std::vector<double>& y,
                  const std::string& x_name = "x", const std::string& y_name = "value");

nlohmann::json provenance_json(const Provenance& p);

/// {schema, ...extra, provenance}.
nlohmann::json sidecar_json(const Provenance& p, const nlohmann::json& extra);

nlohmann::json check_json(const Check& c);
nlohmann::json checks_json(const std::vector<Check>& checks);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

/// Flat `key = value` lines; `#` starts a comment; later keys override earlier ones.
std::map<std::string, std::string> read_config(const std::filesystem::path& path);

/// Comma-separated reals, e.g. "0.8,0.9".
std::vector<double> parse_real_list(const std::string& text);

/// "64x64" -> {64, 64}.
std::vector<std::size_t> parse_shape(const std::string& text);

}  // namespace lfss
