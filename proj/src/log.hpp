#pragma once

#include <spdlog/logger.h>

#include <memory>

namespace arcweave {

/// The library's stderr logger, "arcweave", at error level until changed.
std::shared_ptr<spdlog::logger> logger();

}  // namespace arcweave
