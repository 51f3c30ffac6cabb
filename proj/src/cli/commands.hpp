// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <exception>
#include <iosfwd>
#include <optional>
#include <string>

#include "settings.hpp"

namespace vtg::cli {

struct GroundArgs {
    std::string video_id;
    double duration = 0.0;
    std::string query;
};

struct BatchArgs {
    std::string annotations;
};

struct EvaluateArgs {
    std::string predictions;
    std::string annotations;
    std::optional<std::string> per_query_csv;
};

struct AblateArgs {
    std::string annotations;
};

int cmd_ground(const RunSettings& settings, const GroundArgs& args, std::ostream& out, std::ostream& err);
int cmd_batch(const RunSettings& settings, const BatchArgs& args, std::ostream& out, std::ostream& err);
int cmd_evaluate(const RunSettings& settings, const EvaluateArgs& args, std::ostream& out, std::ostream& err);
int cmd_ablate(const RunSettings& settings, const AblateArgs& args, std::ostream& out, std::ostream& err);

/// Exit code for the exception currently being handled.
int exit_code_for(const std::exception_ptr& error);

} // namespace vtg::cli
