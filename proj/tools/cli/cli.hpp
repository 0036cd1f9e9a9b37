#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace jpegvpr::cli {

/// Runs one invocation, e.g. {"compress", "--manifest", "m.json", ...}
/// (without the program name). Returns the process exit status: 0 ok,
/// 2 bad configuration, 3 data error, 4 internal error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker count used when --workers is absent: $JPEGVPR_WORKERS, else 1.
int default_workers();

}  // namespace jpegvpr::cli
