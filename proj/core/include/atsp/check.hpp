#pragma once

#include <map>
#include <string>

#include "atsp/errors.hpp"

namespace atsp {

// Per-thread tally of evaluated runtime checks, keyed by stage label.
using CheckCounters = std::map<std::string, long>;

CheckCounters& check_counters();
void reset_check_counters();

// Bound checks are on by default; turning them off keeps only the structural
// checks needed for a valid tour.
bool bound_checks_enabled();
void set_bound_checks_enabled(bool on);

namespace detail {
void count_check(const char* stage);
[[noreturn]] void fail_check(const char* stage, const std::string& message);
}  // namespace detail

}  // namespace atsp

// Structural check, always evaluated.
#define ATSP_CHECK(stage, cond, message)                          \
  do {                                                            \
    ::atsp::detail::count_check(stage);                           \
    if (!(cond)) ::atsp::detail::fail_check(stage, (message));    \
  } while (0)

// Guarantee check, skipped when bound checks are disabled.
#define ATSP_BOUND(stage, cond, message)                                \
  do {                                                                  \
    if (::atsp::bound_checks_enabled()) {                               \
      ::atsp::detail::count_check(stage);                               \
      if (!(cond)) ::atsp::detail::fail_check(stage, (message));        \
    }                                                                   \
  } while (0)
