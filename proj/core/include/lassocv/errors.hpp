#pragma once

#include <stdexcept>
#include <string>

namespace lassocv {

/// Design rows (or a fold's training rows) do not have full column rank.
struct RankDeficient : std::runtime_error {
  explicit RankDeficient(const std::string& what) : std::runtime_error(what) {}
};

/// Requested sample size is not a multiple of the replicated block length.
struct BadBlockSize : std::runtime_error {
  explicit BadBlockSize(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : std::runtime_error {
  explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative solver hit its iteration cap; usually signals ill-conditioning.
struct NoConvergence : std::runtime_error {
  explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

/// Two homotopy events coincide within the event tolerance. The path is not
/// resolvable in generic position, so we refuse to pick a winner silently.
struct DegenerateTie : std::runtime_error {
  explicit DegenerateTie(const std::string& what) : std::runtime_error(what) {}
};

/// Deleting rows for a cross-validation fold broke full column rank.
struct RankDeficientFold : std::runtime_error {
  explicit RankDeficientFold(const std::string& what) : std::runtime_error(what) {}
};

/// A rank-one downdate of the Gram inverse is singular (leverage >= 1).
struct SingularDowndate : std::runtime_error {
  explicit SingularDowndate(const std::string& what) : std::runtime_error(what) {}
};

struct IoFailure : std::runtime_error {
  explicit IoFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lassocv
