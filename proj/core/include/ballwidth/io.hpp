#pragma once

#include "ballwidth/coeff_vector.hpp"
#include "ballwidth/cubature.hpp"
#include "ballwidth/points.hpp"
#include "ballwidth/widths.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ballwidth {

// 64-bit FNV-1a, hex encoded
std::string fnv1a_hex(std::string_view bytes);

// Round-trip exact decimal form (%.17g).
std::string format_double(double v);

// {"params": {d, mu, r, s}, "max_degree": N, "blocks": [[...], ...]}
std::string coeff_to_json(const CoeffVector& c);
CoeffVector coeff_from_json(const std::string& text);

// CSV: header x1..xd[,w]; one row per point. Sidecar carries params, epsilon,
// exact_degree, residual, seed and the audit figures.
void write_points(const SeparatedSet& set, const std::string& csv_path,
                  const std::string& manifest_hash = "");
void write_rule(const CubatureRule& rule, const std::string& csv_path,
                const std::string& manifest_hash = "");
SeparatedSet read_points(const std::string& csv_path);
CubatureRule read_rule(const std::string& csv_path);
std::string sidecar_path(const std::string& csv_path);

// Columns n,q,mode,param,value,stderr,samples,seed; leading "# manifest_hash=" line.
std::string width_table_csv(const std::vector<WidthEstimate>& rows,
                            const std::string& manifest_hash = "");
// Rows whose n cell is "fit" (rate-fit summaries) are skipped.
std::vector<WidthEstimate> parse_width_table(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace ballwidth
