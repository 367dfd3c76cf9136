#pragma once

#include <stdexcept>
#include <string>

namespace flexauc {

// Argument outside the mathematical domain of an operation (non-positive
// range, too many channels for the guard band, rank out of range, ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A payment rule was asked to price an instance it is not defined for.
class mechanism_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Brute-force enumeration would exceed its size guard.
class oracle_scale_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Every candidate channel count yields a zero revenue indicator.
class degenerate_market_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary channel search disagreed with the exhaustive sweep.
class non_unimodal_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace flexauc
