#pragma once

// nlohmann/json: the vendored single header when present, else the system package.
#if __has_include(<json.hpp>)
#include <json.hpp>
#else
#include <nlohmann/json.hpp>
#endif
