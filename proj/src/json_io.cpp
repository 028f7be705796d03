#include "vlmc/json_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "vlmc/error.hpp"

namespace vlmc {

namespace {

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) {
    fail(ErrorCode::Internal, "failed to format a double");
  }
  return std::string(buf, ptr);
}

[[noreturn]] void bad_field(const std::string& what) {
  fail(ErrorCode::Parse, "malformed JSON: " + what);
}

int require_int(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    bad_field(std::string("missing integer field '") + key + "'");
  }
  return j[key].get<int>();
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorCode::Io, "cannot open file: " + path);
  }
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    fail(ErrorCode::Parse, "invalid JSON in " + path);
  }
  return j;
}

void write_json_file(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    fail(ErrorCode::Io, "cannot open file for writing: " + path);
  }
  out << j.dump(2) << '\n';
  if (!out) {
    fail(ErrorCode::Io, "failed while writing: " + path);
  }
}

Json tree_to_json(const ContextTree& tree, int depth_bound) {
  Json j;
  j["L"] = depth_bound > 0 ? depth_bound : tree.depth();
  j["m"] = tree.alphabet_size();
  Json contexts = Json::array();
  for (const Context& ctx : tree.contexts()) {
    contexts.push_back(render_context(ctx));
  }
  j["contexts"] = std::move(contexts);
  return j;
}

ContextTree tree_from_json(const Json& j) {
  int depth_bound = require_int(j, "L");
  int m = require_int(j, "m");
  if (!j.contains("contexts") || !j["contexts"].is_array()) {
    bad_field("missing array field 'contexts'");
  }
  std::vector<Context> contexts;
  for (const Json& entry : j["contexts"]) {
    if (!entry.is_string()) bad_field("contexts must be strings");
    contexts.push_back(parse_context(entry.get<std::string>(), m));
  }
  return make_tree(contexts, m, depth_bound);
}

Json allowed_matrix_to_json(const AllowedMatrix& matrix) {
  Json j;
  j["m"] = matrix.alphabet_size();
  Json rows = Json::array();
  for (Symbol from = 0; from < matrix.alphabet_size(); ++from) {
    Json row = Json::array();
    for (Symbol to = 0; to < matrix.alphabet_size(); ++to) {
      row.push_back(matrix.allowed(from, to));
    }
    rows.push_back(std::move(row));
  }
  j["allowed"] = std::move(rows);
  return j;
}

AllowedMatrix allowed_matrix_from_json(const Json& j) {
  int m = require_int(j, "m");
  if (!j.contains("allowed") || !j["allowed"].is_array()) {
    bad_field("missing array field 'allowed'");
  }
  std::vector<std::vector<bool>> rows;
  for (const Json& row : j["allowed"]) {
    if (!row.is_array()) bad_field("'allowed' rows must be arrays");
    std::vector<bool> r;
    for (const Json& cell : row) {
      if (!cell.is_boolean()) bad_field("'allowed' entries must be booleans");
      r.push_back(cell.get<bool>());
    }
    rows.push_back(std::move(r));
  }
  return AllowedMatrix(m, std::move(rows));
}

AllowedMatrix load_allowed_matrix(const std::string& path) {
  return allowed_matrix_from_json(load_json_file(path));
}

Json pct_to_json(const ProbabilisticContextTree& pct) {
  Json j = tree_to_json(pct.tree());
  Json p = Json::object();
  for (const Context& ctx : pct.tree().contexts()) {
    p[render_context(ctx)] = pct.probabilities(ctx);
  }
  j["p"] = std::move(p);
  return j;
}

ProbabilisticContextTree pct_from_json(const Json& j,
                                       std::optional<AllowedMatrix> allowed) {
  ContextTree tree = tree_from_json(j);
  if (!j.contains("p") || !j["p"].is_object()) {
    bad_field("missing object field 'p'");
  }
  ProbabilisticContextTree::ProbMap p;
  for (const auto& [key, value] : j["p"].items()) {
    if (!value.is_array()) bad_field("'p' entries must be arrays of floats");
    Context ctx = parse_context(key, tree.alphabet_size());
    std::vector<double> probs;
    for (const Json& cell : value) {
      if (!cell.is_number()) bad_field("'p' entries must be arrays of floats");
      probs.push_back(cell.get<double>());
    }
    p.emplace(std::move(ctx), std::move(probs));
  }
  return ProbabilisticContextTree(std::move(tree), std::move(p),
                                  std::move(allowed));
}

ProbabilisticContextTree load_pct(
    const std::string& path, const std::optional<std::string>& allowed_path) {
  std::optional<AllowedMatrix> allowed;
  if (allowed_path) allowed = load_allowed_matrix(*allowed_path);
  return pct_from_json(load_json_file(path), std::move(allowed));
}

namespace {

std::string subset_field(const std::vector<int>& subset) {
  std::string out;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i > 0) out += ';';
    out += std::to_string(subset[i] + 1);
  }
  return out;
}

Json subset_to_json(const std::vector<int>& subset) {
  Json out = Json::array();
  for (int i : subset) out.push_back(i + 1);
  return out;
}

}  // namespace

Json renewal_report_to_json(const RenewalReport& report) {
  Json j;
  j["state"] = report.state;
  j["v"] = report.training_size;
  j["n_iter"] = report.n_iter;
  j["burn_in"] = report.burn_in;
  j["seed"] = report.seed;
  j["alpha"] = report.alpha;
  j["constrained"] = report.constrained;
  j["trim"] = Json{{"fraction", report.trim.fraction},
                   {"count", report.trim.count ? Json(*report.trim.count)
                                               : Json(nullptr)},
                   {"per_tail", report.aggregates.trimmed_per_tail}};
  j["aggregates"] =
      Json{{"log10_aibf", report.aggregates.log10_aibf},
           {"log10_gibf", report.aggregates.log10_gibf},
           {"log10_aibf_trimmed", report.aggregates.log10_aibf_trimmed},
           {"log10_gibf_trimmed", report.aggregates.log10_gibf_trimmed}};
  j["labels"] = Json{{"aibf", report.label_aibf.text()},
                     {"gibf", report.label_gibf.text()},
                     {"aibf_trimmed", report.label_aibf_trimmed.text()},
                     {"gibf_trimmed", report.label_gibf_trimmed.text()}};
  Json pbf = Json::array();
  for (const PbfRecord& r : report.records) {
    pbf.push_back(Json{{"subset", subset_to_json(r.subset)},
                       {"log10_pbf", r.log10_pbf},
                       {"log10_num", r.log10_num},
                       {"log10_den", r.log10_den},
                       {"seed_renewing", r.seed_renewing},
                       {"seed_not_renewing", r.seed_not_renewing},
                       {"accept_rate_renewing", r.accept_rate_renewing},
                       {"accept_rate_not_renewing", r.accept_rate_not_renewing}});
  }
  j["pbf"] = std::move(pbf);
  return j;
}

void write_renewal_report_json(const RenewalReport& report,
                               const std::string& path) {
  write_json_file(renewal_report_to_json(report), path);
}

void write_pbf_csv(const RenewalReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    fail(ErrorCode::Io, "cannot open file for writing: " + path);
  }
  out << "subset,log10_pbf,log10_num,log10_den,accept_rate_renewing,"
         "accept_rate_not_renewing\n";
  for (const PbfRecord& r : report.records) {
    out << subset_field(r.subset) << ',' << format_double(r.log10_pbf) << ','
        << format_double(r.log10_num) << ',' << format_double(r.log10_den)
        << ',' << format_double(r.accept_rate_renewing) << ','
        << format_double(r.accept_rate_not_renewing) << '\n';
  }
  if (!out) {
    fail(ErrorCode::Io, "failed while writing: " + path);
  }
}

void write_chain_csv(const ChainRecord& chain, const std::string& csv_path,
                     const std::string& trees_json_path) {
  std::ofstream out(csv_path);
  if (!out) {
    fail(ErrorCode::Io, "cannot open file for writing: " + csv_path);
  }
  out << "iter,tree_id,log_q,accepted\n";
  for (std::int64_t t = 0; t < chain.n_iter; ++t) {
    auto idx = static_cast<std::size_t>(t);
    out << (t + 1) << ',' << chain.tree_ids[idx] << ','
        << format_double(chain.log_q_values[idx]) << ','
        << static_cast<int>(chain.accepted[idx]) << '\n';
  }
  if (!out) {
    fail(ErrorCode::Io, "failed while writing: " + csv_path);
  }

  Json trees = Json::object();
  for (std::size_t id = 0; id < chain.trees.size(); ++id) {
    Json contexts = Json::array();
    for (const Context& ctx : chain.trees[id].contexts()) {
      contexts.push_back(render_context(ctx));
    }
    trees[std::to_string(id)] = std::move(contexts);
  }
  write_json_file(Json{{"trees", std::move(trees)}}, trees_json_path);
}

PosteriorReport summarize_chain(const ChainRecord& chain,
                                std::int64_t burn_in) {
  PosteriorReport report;
  report.n_iter = chain.n_iter;
  report.burn_in = burn_in;
  report.seed = chain.seed;
  report.acceptance_rate = chain.acceptance_rate;

  std::vector<double> freq = chain.frequencies(burn_in);
  const double total = static_cast<double>(chain.n_iter - burn_in);
  for (std::size_t id = 0; id < chain.trees.size(); ++id) {
    if (freq[id] == 0.0) continue;
    report.entries.push_back(PosteriorEntry{
        chain.trees[id], freq[id],
        static_cast<std::int64_t>(std::llround(freq[id] * total))});
  }
  // Descending frequency; first-visit order breaks ties deterministically.
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const PosteriorEntry& a, const PosteriorEntry& b) {
                     return a.frequency > b.frequency;
                   });
  return report;
}

Json posterior_report_to_json(const PosteriorReport& report) {
  Json j;
  j["n_iter"] = report.n_iter;
  j["burn_in"] = report.burn_in;
  j["seed"] = report.seed;
  j["acceptance_rate"] = report.acceptance_rate;
  j["num_distinct_trees"] = report.entries.size();
  Json trees = Json::array();
  for (const PosteriorEntry& entry : report.entries) {
    Json contexts = Json::array();
    for (const Context& ctx : entry.tree.contexts()) {
      contexts.push_back(render_context(ctx));
    }
    trees.push_back(Json{{"frequency", entry.frequency},
                         {"visits", entry.visits},
                         {"contexts", std::move(contexts)}});
  }
  j["trees"] = std::move(trees);
  return j;
}

void write_posterior_report_json(const PosteriorReport& report,
                                 const std::string& path) {
  write_json_file(posterior_report_to_json(report), path);
}

}  // namespace vlmc
