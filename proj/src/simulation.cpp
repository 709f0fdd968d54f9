#include "cellrobust/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cellrobust/linalg.hpp"
#include "cellrobust/rng.hpp"

namespace cellrobust {

std::string scheme_name(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::Banded: return "banded";
    case SchemeKind::Sparse: return "sparse";
    case SchemeKind::Dense: return "dense";
    case SchemeKind::Diagonal: return "diagonal";
  }
  return "unknown";
}

SchemeKind scheme_from_name(const std::string& name) {
  if (name == "banded") return SchemeKind::Banded;
  if (name == "sparse") return SchemeKind::Sparse;
  if (name == "dense") return SchemeKind::Dense;
  if (name == "diagonal") return SchemeKind::Diagonal;
  throw ConfigError("unknown scheme '" + name +
                    "' (valid: banded, sparse, dense, diagonal)");
}

namespace {

SymMatrix make_sparse_precision(std::size_t p, std::uint64_t seed) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Rng rng(seed + static_cast<std::uint64_t>(attempt));
    SymMatrix base(p, 0.0);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j)
        if (rng.bernoulli(0.1)) base.set(i, j, 0.5);

    const EigenSym eig = sym_eigen(base);
    const double mu_max = eig.values.front();
    const double mu_min = eig.values.back();
    const double target = static_cast<double>(p);

    // cond(base + delta I) = (mu_max + delta) / (mu_min + delta) decreases
    // monotonically in delta; bracket it before bisecting in log space.
    auto cond_at = [&](double delta) { return (mu_max + delta) / (mu_min + delta); };
    double lo = std::max(1e-12, -mu_min + 1e-12 * std::max(1.0, std::abs(mu_min)));
    double hi = std::max(1.0, mu_max) * 1e6;
    if (!(cond_at(lo) > target) || !(cond_at(hi) < target)) continue;  // next seed

    double delta = std::sqrt(lo * hi);
    for (int iter = 0; iter < 500; ++iter) {
      delta = std::sqrt(lo * hi);
      const double cond = cond_at(delta);
      if (std::abs(cond - target) <= 1e-3 * target) break;
      if (cond > target)
        lo = delta;
      else
        hi = delta;
    }
    if (std::abs(cond_at(delta) - target) > 1e-3 * target) continue;

    SymMatrix shifted = add_scaled_identity(base, delta);
    SymMatrix out(p);
    for (std::size_t i = 0; i < p; ++i) {
      const double di = std::sqrt(shifted(i, i));
      for (std::size_t j = i; j < p; ++j)
        out.set(i, j, shifted(i, j) / (di * std::sqrt(shifted(j, j))));
    }
    cholesky(out);  // PD check
    return out;
  }
  throw GenerationFailureError(
      "sparse scheme: no draw produced a bracketable condition number in 100 attempts");
}

}  // namespace

SymMatrix make_precision(const PrecisionScheme& scheme) {
  if (scheme.p < 1) throw DomainError("make_precision: dimension must be at least 1");
  const std::size_t p = scheme.p;
  SymMatrix omega(p);
  switch (scheme.kind) {
    case SchemeKind::Banded:
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j)
          omega.set(i, j, std::pow(0.6, static_cast<double>(j - i)));
      break;
    case SchemeKind::Sparse:
      return make_sparse_precision(p, scheme.seed);
    case SchemeKind::Dense:
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) omega.set(i, j, i == j ? 1.0 : 0.5);
      break;
    case SchemeKind::Diagonal:
      omega = SymMatrix::identity(p);
      break;
  }
  cholesky(omega);  // PD check
  return omega;
}

DataMatrix sample_mvn(const SymMatrix& omega, std::size_t n, std::uint64_t seed) {
  const std::size_t p = omega.dim();
  const SymMatrix cov = inverse_spd(omega);
  const Matrix lower = cholesky(cov);

  Rng rng(seed);
  DataMatrix data(n, p);
  std::vector<double> z(p);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < p; ++j) z[j] = rng.next_normal();
    for (std::size_t i = 0; i < p; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j <= i; ++j) acc += lower(i, j) * z[j];
      data(k, i) = acc;
    }
  }
  Provenance prov;
  prov.sample_seed = seed;
  data.set_provenance(prov);
  return data;
}

DataMatrix contaminate(const DataMatrix& clean, const ContaminationSpec& spec,
                       std::uint64_t seed) {
  if (spec.mechanism == Mechanism::MultivariateT || spec.mechanism == Mechanism::AlternativeT)
    throw DomainError("contaminate: heavy-tail mechanisms replace sampling; use "
                      "sample_heavy_tail");
  spec.validate(clean.cols());

  DataMatrix out = clean;
  Rng rng(seed);
  const double sd = spec.outlier_sd();

  switch (spec.mechanism) {
    case Mechanism::None:
      break;
    case Mechanism::Cellwise:
      for (std::size_t j = 0; j < out.cols(); ++j) {
        const double eps = spec.epsilon_for(j);
        for (std::size_t i = 0; i < out.rows(); ++i) {
          if (rng.bernoulli(eps)) {
            out(i, j) = rng.next_normal(spec.outlier_mean, sd);
            out.set_masked(i, j);
          }
        }
      }
      break;
    case Mechanism::Rowwise: {
      const double eps = spec.epsilon_for(0);
      for (std::size_t i = 0; i < out.rows(); ++i) {
        if (!rng.bernoulli(eps)) continue;
        for (std::size_t j = 0; j < out.cols(); ++j) {
          out(i, j) = rng.next_normal(spec.outlier_mean, sd);
          out.set_masked(i, j);
        }
      }
      break;
    }
    case Mechanism::Missing:
      for (std::size_t j = 0; j < out.cols(); ++j) {
        const double eps = spec.epsilon_for(j);
        for (std::size_t i = 0; i < out.rows(); ++i) {
          if (rng.bernoulli(eps)) {
            out(i, j) = 0.0;  // zero fill
            out.set_masked(i, j);
          }
        }
      }
      break;
    default:
      break;
  }

  Provenance prov;
  if (clean.provenance()) prov = *clean.provenance();
  prov.contamination = spec;
  prov.contamination_seed = seed;
  out.set_provenance(prov);
  return out;
}

DataMatrix sample_heavy_tail(const SymMatrix& omega, std::size_t n, Mechanism kind,
                             double dof, std::uint64_t seed) {
  if (kind != Mechanism::MultivariateT && kind != Mechanism::AlternativeT)
    throw DomainError("sample_heavy_tail: mechanism must be a t variant");
  if (!(dof > 0.0)) throw DomainError("sample_heavy_tail: dof must be positive");

  DataMatrix data = sample_mvn(omega, n, seed);
  Rng rng(seed ^ 0xD1B54A32D192ED03ULL);  // divisors on an offset stream
  const double half_dof = dof / 2.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (kind == Mechanism::MultivariateT) {
      const double divisor = std::sqrt(rng.next_gamma(half_dof, half_dof));
      for (std::size_t j = 0; j < data.cols(); ++j) data(k, j) /= divisor;
    } else {
      for (std::size_t j = 0; j < data.cols(); ++j)
        data(k, j) /= std::sqrt(rng.next_gamma(half_dof, half_dof));
    }
  }
  Provenance prov;
  prov.sample_seed = seed;
  prov.contamination.mechanism = kind;
  prov.contamination.t_dof = dof;
  data.set_provenance(prov);
  return data;
}

}  // namespace cellrobust
