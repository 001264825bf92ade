#ifndef PERSUASION_GATEWAY_CLI_H_
#define PERSUASION_GATEWAY_CLI_H_

#include <iosfwd>

namespace persuasion::gateway {

// Entry point of the `persuasion` tool. Returns 0 on success, 2 on a usage
// error and 1 on any other failure; failures print one JSON object
// {"error", "message", ...} on `err`.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace persuasion::gateway

#endif  // PERSUASION_GATEWAY_CLI_H_
