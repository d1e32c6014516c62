#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace mtsdp {

enum class LogLevel { error = 0, info = 1, debug = 2 };

/// Level from MTSDP_LOG in {error, info, debug}; defaults to error.
inline LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("MTSDP_LOG");
        if (!env) return LogLevel::error;
        const std::string v(env);
        if (v == "debug") return LogLevel::debug;
        if (v == "info") return LogLevel::info;
        return LogLevel::error;
    }();
    return level;
}

inline void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::info) std::cerr << "[mtsdp] " << msg << "\n";
}

inline void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::debug) std::cerr << "[mtsdp debug] " << msg << "\n";
}

}  // namespace mtsdp
