#pragma once

#include <string_view>

namespace sparsevar::log {

// Thin wrappers over spdlog. Verbosity comes from the SPARSEVAR_LOG
// environment variable (trace, debug, info, warn, error, off); default warn.
void init_from_env();
void info(std::string_view msg);
void warn(std::string_view msg);
void debug(std::string_view msg);

}  // namespace sparsevar::log
