#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "woldkit/lattice.hpp"
#include "woldkit/zoo.hpp"

namespace woldkit {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "woldkit";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kFormatVersion = 1;

/// Round to 12 significant digits so serialized reports are stable across
/// platforms and thread counts.
double round_sig(double v);
Json complex_json(Complex v);

/// FNV-1a 64-bit content digest, lowercase hex.
std::string fnv1a_hex(const std::string& bytes);

struct LoadedTuple {
  enum class Kind { Dense, Lattice } kind = Kind::Dense;
  ToleranceProfile tol;
  // dense
  std::vector<Matrix> ops;
  TwistFamily twist;
  // lattice
  LatticeTuple lattice;
};

/// Parses a tuple file; throws Error with a positioned message on bad input.
LoadedTuple parse_tuple_json(const Json& j);
LoadedTuple load_tuple_file(const std::string& path);

Json dense_tuple_json(const std::vector<Matrix>& ops, const TwistFamily& twist,
                      const std::optional<ToleranceProfile>& tol = std::nullopt);
Json lattice_tuple_json(const LatticeTuple& t,
                        const std::optional<ToleranceProfile>& tol = std::nullopt);
void save_json(const std::string& path, const Json& j);

struct ReportMeta {
  std::string input_digest;
  bool canonical = false;  // exclude the timestamp for golden comparisons
};

Json relation_report_json(const RelationReport& rep);
Json lattice_relation_report_json(const LatticeRelationReport& rep);

Json verify_report(const LoadedTuple& in, const ReportMeta& meta, int window);

Json decomposition_report(const TwistedTuple& t, const DecompositionResult& r,
                          const ReportMeta& meta);

struct OracleAgreement {
  int interior = 0;
  int agree = 0;
  double pct = 0.0;
};

/// Cross-checks classify_index labels against slice membership in the dense
/// decomposition of the densified tuple, over interior window indices.
OracleAgreement lattice_dense_oracle(const LatticeTuple& t, int window, int margin = 3,
                                     std::int64_t step_cap = -1);

Json wold_report(const LatticeTuple& t, int window, std::int64_t step_cap, bool with_oracle,
                 const ReportMeta& meta);

std::string report_text_summary(const Json& report);

}  // namespace woldkit
