#include "log.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace arcweave {

std::shared_ptr<spdlog::logger> logger() {
    static const std::shared_ptr<spdlog::logger> log = [] {
        auto l = spdlog::get("arcweave");
        if (!l) l = spdlog::stderr_color_mt("arcweave");
        l->set_level(spdlog::level::err);
        return l;
    }();
    return log;
}

}  // namespace arcweave
