#pragma once

#include <string>

#include "coflow/deadlines.hpp"
#include "coflow/model.hpp"

namespace coflow {

/// Text formats:
///   instance {"left","right","coflows":[{"weight","release","flows":[{"u","v","mult"}]}]}
///   schedule {"slots":{"<t>":[{"coflow","u","v"}]}}
///   profile  {"theta":"p/q","deadlines":["p/q",...]}
/// Rationals are written as "p/q" strings; integers are accepted on input.
/// Malformed documents raise StructuralError.

Instance instance_from_json(const std::string& text);
std::string instance_to_json(const Instance& instance);

Schedule schedule_from_json(const std::string& text);
std::string schedule_to_json(const Schedule& schedule);

/// The profile text carries deadlines only; releases and order come from the
/// instance.
DeadlineProfile profile_from_json(const Instance& instance, const std::string& text);
std::string profile_to_json(const DeadlineProfile& profile);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace coflow
