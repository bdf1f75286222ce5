#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jacring::cli {

// 0: every assertion held, 1: a property failed (the JSON says which),
// 2: usage or configuration error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// JACRING_THREADS if set and positive, else the hardware concurrency.
unsigned default_threads();

}  // namespace jacring::cli
