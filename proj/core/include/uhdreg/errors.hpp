#ifndef UHDREG_ERRORS_HPP
#define UHDREG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace uhdreg {

/// Thrown when an exhaustive subset enumeration would exceed its budget.
/// Carries the offending subset count so callers can report it.
class budget_error : public std::runtime_error {
 public:
  budget_error(const std::string& what, double subset_count)
      : std::runtime_error(what), subset_count_(subset_count) {}

  double subset_count() const { return subset_count_; }

 private:
  double subset_count_;
};

/// Invalid or inconsistent experiment configuration (maps to CLI exit code 2).
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace uhdreg

#endif
