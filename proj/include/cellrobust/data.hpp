#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cellrobust/errors.hpp"

namespace cellrobust {

enum class Mechanism { None, Cellwise, Rowwise, Missing, MultivariateT, AlternativeT };

std::string mechanism_name(Mechanism m);
Mechanism mechanism_from_name(const std::string& name);

// Contamination recipe. epsilon holds either a single fraction broadcast to
// every column or one fraction per column.
struct ContaminationSpec {
  Mechanism mechanism = Mechanism::None;
  std::vector<double> epsilon = {0.0};
  double outlier_mean = 10.0;
  double outlier_var = 0.2;  // read as a variance; see outlier_sd()
  double t_dof = 3.0;

  double epsilon_for(std::size_t column) const {
    if (epsilon.empty()) return 0.0;
    return epsilon.size() == 1 ? epsilon[0] : epsilon.at(column);
  }
  double max_epsilon() const {
    double worst = 0.0;
    for (double e : epsilon) worst = std::max(worst, e);
    return worst;
  }
  double outlier_sd() const;
  void validate(std::size_t p) const;
};

struct Provenance {
  ContaminationSpec contamination;
  std::uint64_t sample_seed = 0;
  std::uint64_t contamination_seed = 0;
};

// n x p observation matrix, stored column-major so estimator loops get a
// contiguous view of each variable. An optional cell mask records which
// entries were replaced by the contamination step.
class DataMatrix {
 public:
  DataMatrix() = default;
  DataMatrix(std::size_t n_rows, std::size_t n_cols)
      : rows_(n_rows), cols_(n_cols), values_(n_rows * n_cols, 0.0) {
    default_names();
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double operator()(std::size_t i, std::size_t j) const { return values_[j * rows_ + i]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[j * rows_ + i]; }

  std::span<const double> column(std::size_t j) const {
    return {values_.data() + j * rows_, rows_};
  }

  const std::vector<std::string>& column_names() const noexcept { return names_; }
  void set_column_names(std::vector<std::string> names);

  bool has_mask() const noexcept { return !mask_.empty(); }
  void ensure_mask() {
    if (mask_.empty()) mask_.assign(rows_ * cols_, 0);
  }
  bool masked(std::size_t i, std::size_t j) const {
    return !mask_.empty() && mask_[j * rows_ + i] != 0;
  }
  void set_masked(std::size_t i, std::size_t j) {
    ensure_mask();
    mask_[j * rows_ + i] = 1;
  }
  std::size_t mask_count() const;

  const std::optional<Provenance>& provenance() const noexcept { return provenance_; }
  void set_provenance(Provenance p) { provenance_ = std::move(p); }

 private:
  void default_names();

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;       // column-major
  std::vector<std::uint8_t> mask_;   // column-major, empty when untouched
  std::vector<std::string> names_;
  std::optional<Provenance> provenance_;
};

}  // namespace cellrobust
