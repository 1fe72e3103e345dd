#pragma once

#include <stdexcept>
#include <string>

namespace vibropol {

/// A physically meaningless request: non-positive wavenumber, grazing
/// incidence, a lossy ambient, an ultra-strong coupling outside the
/// two-mode model. The CLI maps this to exit code 3.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or inconsistent user input. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vibropol
