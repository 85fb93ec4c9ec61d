#pragma once

#include <iosfwd>

namespace slotfill::cli {

/// Entry point of the `slotfill` tool. Data goes to `out`, logs and
/// diagnostics to `err`; `in` feeds `tag --input -`.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace slotfill::cli
