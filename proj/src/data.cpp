#include "cellrobust/data.hpp"

#include <cmath>

namespace cellrobust {

std::string mechanism_name(Mechanism m) {
  switch (m) {
    case Mechanism::None: return "none";
    case Mechanism::Cellwise: return "cellwise";
    case Mechanism::Rowwise: return "rowwise";
    case Mechanism::Missing: return "missing";
    case Mechanism::MultivariateT: return "multivariate_t";
    case Mechanism::AlternativeT: return "alternative_t";
  }
  return "unknown";
}

Mechanism mechanism_from_name(const std::string& name) {
  if (name == "none") return Mechanism::None;
  if (name == "cellwise") return Mechanism::Cellwise;
  if (name == "rowwise") return Mechanism::Rowwise;
  if (name == "missing") return Mechanism::Missing;
  if (name == "multivariate_t") return Mechanism::MultivariateT;
  if (name == "alternative_t") return Mechanism::AlternativeT;
  throw ConfigError("unknown contamination mechanism '" + name +
                    "' (valid: none, cellwise, rowwise, missing, multivariate_t, "
                    "alternative_t)");
}

double ContaminationSpec::outlier_sd() const {
  if (!(outlier_var >= 0.0)) throw DomainError("outlier variance must be nonnegative");
  return std::sqrt(outlier_var);
}

void ContaminationSpec::validate(std::size_t p) const {
  if (epsilon.size() != 1 && epsilon.size() != p)
    throw ConfigError("epsilon must be scalar or one fraction per column");
  for (double e : epsilon)
    if (!(e >= 0.0 && e < 1.0)) throw DomainError("epsilon fractions must lie in [0, 1)");
  if (!(t_dof > 0.0)) throw DomainError("t degrees of freedom must be positive");
}

void DataMatrix::set_column_names(std::vector<std::string> names) {
  if (names.size() != cols_) throw DimensionMismatchError("column name count differs");
  names_ = std::move(names);
}

std::size_t DataMatrix::mask_count() const {
  std::size_t count = 0;
  for (auto b : mask_) count += b;
  return count;
}

void DataMatrix::default_names() {
  names_.resize(cols_);
  for (std::size_t j = 0; j < cols_; ++j) names_[j] = "x" + std::to_string(j + 1);
}

}  // namespace cellrobust
