#ifndef PLF_CLI_HPP
#define PLF_CLI_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"

namespace plf::cli {

/// Exit codes: 0 success / feasible / sat, 1 infeasible / unsat / violation, 2 usage or input error.
enum ExitCode : int { kOk = 0, kNegative = 1, kInputError = 2 };

struct RunReport {
    std::string command;
    std::map<std::string, std::string> inputs;  // path -> sha256 digest
    nlohmann::json verdicts = nlohmann::json::object();
    int exit_code = kOk;

    nlohmann::json to_json() const;
};

struct Streams {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
};

struct EvalOptions {
    std::string model_file;
    std::optional<std::string> world;
    std::string formula;
    bool validity = false;
};

struct CheckOptions {
    std::string behavior_file;  // "-" reads stdin
    std::string mode = "plf";   // pns | plf | modal
    std::optional<std::string> out;
};

struct HardyOptions {
    double epsilon = 1e-9;
    std::string out = ".";  // directory, or "-" to stream the behavior to stdout
};

struct ProveOptions {
    std::optional<std::string> drop;  // E2 | E3 | E4
};

RunReport cmd_eval(const EvalOptions& opt, Streams io);
RunReport cmd_check(const CheckOptions& opt, Streams io);
RunReport cmd_hardy(const HardyOptions& opt, Streams io);
RunReport cmd_prove(const ProveOptions& opt, Streams io);
RunReport cmd_parse(const std::string& formula, Streams io);

/// Full command line dispatch; returns the process exit code.
int run(int argc, const char* const* argv, Streams io);

}  // namespace plf::cli

#endif
