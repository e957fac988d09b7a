#pragma once

// Command-line front end. Exit codes: 0 verdict computed, 1 error,
// 2 usage error, 3 budget exhausted or decomposition incomplete.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "flatblock/blocking.h"
#include "flatblock/holonomy.h"
#include "flatblock/tracer.h"

namespace flatblock::cli {

using Json = nlohmann::ordered_json;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

Json to_json(const Segment& s);
Json to_json(const BlockingReport& r);
Json to_json(const TorusCoverVerdict& v);
Json to_json(const CylinderDecomposition& d);

Segment segment_from_json(const Surface& m, const Json& j);

}  // namespace flatblock::cli
