#include "vlmc/dataset.hpp"

#include <fstream>
#include <sstream>

#include "vlmc/error.hpp"

namespace vlmc {

Alphabet::Alphabet(int m) : size(m) {
  if (m < 2) {
    fail(ErrorCode::InvalidArgument, "alphabet size must be at least 2, got " +
                                         std::to_string(m));
  }
}

Dataset::Dataset(Alphabet alphabet, std::vector<Sequence> sequences,
                 int depth_bound)
    : alphabet_(alphabet),
      sequences_(std::move(sequences)),
      depth_bound_(depth_bound) {
  if (depth_bound_ < 1) {
    fail(ErrorCode::InvalidArgument, "depth bound must be positive, got " +
                                         std::to_string(depth_bound_));
  }
  for (std::size_t i = 0; i < sequences_.size(); ++i) {
    const Sequence& seq = sequences_[i];
    if (static_cast<int>(seq.size()) <= depth_bound_) {
      fail(ErrorCode::Validation,
           "sequence " + std::to_string(i + 1) + " has length " +
               std::to_string(seq.size()) + " but must exceed the depth bound " +
               std::to_string(depth_bound_));
    }
    for (std::size_t t = 0; t < seq.size(); ++t) {
      if (!alphabet_.contains(seq[t])) {
        fail(ErrorCode::Validation,
             "sequence " + std::to_string(i + 1) + ", position " +
                 std::to_string(t + 1) + ": symbol " + std::to_string(seq[t]) +
                 " outside alphabet of size " + std::to_string(alphabet_.size));
      }
    }
  }
}

std::int64_t Dataset::total_transitions() const {
  std::int64_t total = 0;
  for (const Sequence& seq : sequences_) {
    total += static_cast<std::int64_t>(seq.size()) - depth_bound_;
  }
  return total;
}

Dataset Dataset::subset(const std::vector<int>& indices) const {
  std::vector<Sequence> picked;
  picked.reserve(indices.size());
  for (int i : indices) {
    if (i < 0 || i >= num_sequences()) {
      fail(ErrorCode::InvalidArgument,
           "sequence index " + std::to_string(i) + " out of range");
    }
    picked.push_back(sequences_[i]);
  }
  return Dataset(alphabet_, std::move(picked), depth_bound_);
}

Dataset Dataset::complement(const std::vector<int>& indices) const {
  std::vector<bool> drop(sequences_.size(), false);
  for (int i : indices) {
    if (i < 0 || i >= num_sequences()) {
      fail(ErrorCode::InvalidArgument,
           "sequence index " + std::to_string(i) + " out of range");
    }
    drop[i] = true;
  }
  std::vector<Sequence> kept;
  kept.reserve(sequences_.size() - indices.size());
  for (std::size_t i = 0; i < sequences_.size(); ++i) {
    if (!drop[i]) kept.push_back(sequences_[i]);
  }
  return Dataset(alphabet_, std::move(kept), depth_bound_);
}

Dataset parse_dataset(const std::string& text, int alphabet_size,
                      int depth_bound) {
  Alphabet alphabet(alphabet_size);
  std::vector<Sequence> sequences;
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    std::istringstream tokens(line);
    Sequence seq;
    std::string token;
    int token_no = 0;
    while (tokens >> token) {
      ++token_no;
      long value = 0;
      std::size_t used = 0;
      bool bad = false;
      try {
        value = std::stol(token, &used);
      } catch (const std::exception&) {
        bad = true;
      }
      if (bad || used != token.size() || value < 0) {
        fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ", token " +
                                   std::to_string(token_no) + ": '" + token +
                                   "' is not a non-negative integer");
      }
      if (value >= alphabet_size) {
        fail(ErrorCode::Parse, "line " + std::to_string(line_no) + ", token " +
                                   std::to_string(token_no) + ": symbol " +
                                   std::to_string(value) +
                                   " outside alphabet of size " +
                                   std::to_string(alphabet_size));
      }
      seq.push_back(static_cast<Symbol>(value));
    }
    if (seq.empty()) continue;  // blank line
    if (static_cast<int>(seq.size()) <= depth_bound) {
      fail(ErrorCode::Validation,
           "line " + std::to_string(line_no) + ": sequence length " +
               std::to_string(seq.size()) + " must exceed the depth bound " +
               std::to_string(depth_bound));
    }
    sequences.push_back(std::move(seq));
  }
  return Dataset(alphabet, std::move(sequences), depth_bound);
}

Dataset load_dataset(const std::string& path, int alphabet_size,
                     int depth_bound) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorCode::Io, "cannot open dataset file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dataset(buffer.str(), alphabet_size, depth_bound);
}

void save_dataset(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    fail(ErrorCode::Io, "cannot open file for writing: " + path);
  }
  for (const Sequence& seq : dataset.sequences()) {
    for (std::size_t t = 0; t < seq.size(); ++t) {
      if (t > 0) out << ' ';
      out << seq[t];
    }
    out << '\n';
  }
  if (!out) {
    fail(ErrorCode::Io, "failed while writing: " + path);
  }
}

}  // namespace vlmc
