#include <map>

#include "hypgame/evaluation.hpp"

namespace hypgame {

void validate(const LabelMatrix& matrix) {
  if (matrix.raters.size() < 2) throw Error(ErrorCode::invalid_input, "agreement needs at least two raters");
  if (matrix.labels.size() != matrix.raters.size()) {
    throw Error(ErrorCode::invalid_input, "label matrix has " + std::to_string(matrix.labels.size()) +
                                              " rows for " + std::to_string(matrix.raters.size()) + " raters");
  }
  for (std::size_t r = 0; r < matrix.labels.size(); ++r) {
    if (matrix.labels[r].size() != matrix.items.size()) {
      throw Error(ErrorCode::invalid_input, "rater '" + matrix.raters[r] + "' has " +
                                                std::to_string(matrix.labels[r].size()) + " labels for " +
                                                std::to_string(matrix.items.size()) + " items");
    }
  }
}

double krippendorff_alpha(const LabelMatrix& matrix) {
  validate(matrix);
  // Coincidence matrix o[c][k].
  std::map<int, std::map<int, double>> o;
  std::size_t usable = 0;
  for (std::size_t item = 0; item < matrix.items.size(); ++item) {
    std::vector<int> values;
    for (const auto& row : matrix.labels) {
      if (row[item]) values.push_back(*row[item]);
    }
    if (values.size() < 2) continue;
    ++usable;
    const double w = 1.0 / static_cast<double>(values.size() - 1);
    for (std::size_t i = 0; i < values.size(); ++i) {
      for (std::size_t j = 0; j < values.size(); ++j) {
        if (i != j) o[values[i]][values[j]] += w;
      }
    }
  }
  if (usable < 2) throw Error(ErrorCode::invalid_input, "alpha needs at least two items rated twice");

  std::map<int, double> n_c;
  double n = 0.0;
  double disagree = 0.0;
  for (const auto& [c, row] : o) {
    for (const auto& [k, v] : row) {
      n_c[c] += v;
      n += v;
      if (c != k) disagree += v;
    }
  }
  double expected = 0.0;
  for (const auto& [c, nc] : n_c) {
    for (const auto& [k, nk] : n_c) {
      if (c != k) expected += nc * nk;
    }
  }
  if (expected == 0.0) {
    throw Error(ErrorCode::undefined_metric, "alpha is undefined without label variation");
  }
  return 1.0 - (n - 1.0) * disagree / expected;
}

std::vector<Label> strict_consensus(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::invalid_input, "annotator label lists differ in length");
  std::vector<Label> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && b[i]) out[i] = (*a[i] == 1 && *b[i] == 1) ? 1 : 0;
  }
  return out;
}

}  // namespace hypgame
