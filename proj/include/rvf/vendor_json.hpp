#pragma once

// nlohmann/json, vendored as a single header (vendor/json.hpp).
#include "json.hpp"
