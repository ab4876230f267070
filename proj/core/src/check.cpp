#include "atsp/check.hpp"

namespace atsp {

namespace {
thread_local CheckCounters tl_counters;
thread_local bool tl_bound_checks = true;
}  // namespace

CheckCounters& check_counters() { return tl_counters; }
void reset_check_counters() { tl_counters.clear(); }

bool bound_checks_enabled() { return tl_bound_checks; }
void set_bound_checks_enabled(bool on) { tl_bound_checks = on; }

namespace detail {

void count_check(const char* stage) { ++tl_counters[stage]; }

void fail_check(const char* stage, const std::string& message) {
  ++tl_counters[std::string(stage) + ".failed"];
  throw InternalError(stage, message);
}

}  // namespace detail
}  // namespace atsp
