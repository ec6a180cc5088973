#pragma once

#include <stdexcept>
#include <string>

namespace qepi {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

// Covariance matrix fails positive-definiteness.
struct NonPositiveCovariance : Error {
  using Error::Error;
};

// Eigenvalues of J*gamma do not occur in +-i*nu pairs; numerical breakdown.
struct PairingFailure : Error {
  using Error::Error;
};

// A state (or intermediate state) leaks more population into the top Fock
// level than the configured truncation budget allows.
struct TruncationBudgetExceeded : Error {
  using Error::Error;
};

// rho has non-negligible weight outside the clamped support of sigma: the
// divergence is genuinely infinite, not just ill-conditioned.
struct SupportMismatch : Error {
  using Error::Error;
};

// Covariance of a truncated state violates gamma + iJ >= 0 beyond what
// truncation noise can explain; the cutoff is too small.
struct UncertaintyViolation : Error {
  using Error::Error;
};

// Divergence-based Fisher information is undefined for rank-deficient
// states; the caller must regularize first.
struct RankDeficient : Error {
  using Error::Error;
};

struct StepTooLarge : Error {
  using Error::Error;
};

struct StiffnessFailure : Error {
  using Error::Error;
};

// Blachman diffusion clock exceeded the truncation-safe horizon.
struct ClockOverflow : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace qepi
