#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vlmc {

using Symbol = std::int32_t;

// Alphabet {0, 1, ..., size-1}.
struct Alphabet {
  int size = 0;

  explicit Alphabet(int m);
  bool contains(Symbol s) const { return s >= 0 && s < size; }
};

using Sequence = std::vector<Symbol>;

// A set of independent symbol sequences over a common alphabet, analysed
// with transition memory bounded by depth_bound. Every sequence must be
// strictly longer than depth_bound: the first depth_bound symbols act as
// conditioning constants, so at least one counted transition remains.
class Dataset {
public:
  Dataset(Alphabet alphabet, std::vector<Sequence> sequences, int depth_bound);

  const Alphabet& alphabet() const { return alphabet_; }
  int alphabet_size() const { return alphabet_.size; }
  int depth_bound() const { return depth_bound_; }
  int num_sequences() const { return static_cast<int>(sequences_.size()); }
  const Sequence& sequence(int i) const { return sequences_.at(i); }
  const std::vector<Sequence>& sequences() const { return sequences_; }

  // Total number of counted transitions, sum_i (T_i - L).
  std::int64_t total_transitions() const;

  // Sub-dataset with the given sequence indices, in the given order.
  Dataset subset(const std::vector<int>& indices) const;
  // Sub-dataset with every sequence except the given indices.
  Dataset complement(const std::vector<int>& indices) const;

private:
  Alphabet alphabet_;
  std::vector<Sequence> sequences_;
  int depth_bound_;
};

// Reads the plain-text dataset format: one sequence per line,
// whitespace-separated non-negative integers. Blank lines are skipped.
// Reports the offending line and token on range or length violations.
Dataset load_dataset(const std::string& path, int alphabet_size,
                     int depth_bound);

// Parses the same format from an in-memory string (used by loaders/tests).
Dataset parse_dataset(const std::string& text, int alphabet_size,
                      int depth_bound);

void save_dataset(const Dataset& dataset, const std::string& path);

}  // namespace vlmc
