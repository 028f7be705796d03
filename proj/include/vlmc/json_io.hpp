#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "vlmc/inference.hpp"
#include "vlmc/intrinsic.hpp"
#include "vlmc/simulate.hpp"
#include "vlmc/tree.hpp"

namespace vlmc {

using Json = nlohmann::json;

// Tree files: {"L": int, "m": int, "contexts": ["oldest-first strings"]}.
Json tree_to_json(const ContextTree& tree, int depth_bound = 0);
ContextTree tree_from_json(const Json& j);

// Allowed-transition files: {"m": int, "allowed": [[bool, ...], ...]},
// rows indexed by the source symbol.
Json allowed_matrix_to_json(const AllowedMatrix& matrix);
AllowedMatrix allowed_matrix_from_json(const Json& j);
AllowedMatrix load_allowed_matrix(const std::string& path);

// Probabilistic context trees: the tree fields plus
// "p": {"<oldest-first context>": [floats]}.
Json pct_to_json(const ProbabilisticContextTree& pct);
ProbabilisticContextTree pct_from_json(
    const Json& j, std::optional<AllowedMatrix> allowed = std::nullopt);
ProbabilisticContextTree load_pct(
    const std::string& path,
    const std::optional<std::string>& allowed_path = std::nullopt);

Json renewal_report_to_json(const RenewalReport& report);
void write_renewal_report_json(const RenewalReport& report,
                               const std::string& path);
// Per-subset table behind the report: subset indices (1-based,
// ';'-separated), the log10 PBF decomposition and chain acceptance rates.
void write_pbf_csv(const RenewalReport& report, const std::string& path);

// Chain dump: CSV of iter,tree_id,log_q,accepted plus a sidecar JSON
// mapping tree ids to context lists.
void write_chain_csv(const ChainRecord& chain, const std::string& csv_path,
                     const std::string& trees_json_path);

// Empirical tree frequencies of a chain, most visited first.
struct PosteriorEntry {
  ContextTree tree;
  double frequency;
  std::int64_t visits;
};

struct PosteriorReport {
  std::int64_t n_iter = 0;
  std::int64_t burn_in = 0;
  std::uint64_t seed = 0;
  double acceptance_rate = 0.0;
  std::vector<PosteriorEntry> entries;
};

PosteriorReport summarize_chain(const ChainRecord& chain,
                                std::int64_t burn_in = 0);
Json posterior_report_to_json(const PosteriorReport& report);
void write_posterior_report_json(const PosteriorReport& report,
                                 const std::string& path);

void write_json_file(const Json& j, const std::string& path);
Json load_json_file(const std::string& path);

}  // namespace vlmc
