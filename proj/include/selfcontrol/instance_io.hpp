#pragma once

// JSON instance files.
//
//   {
//     "alternatives": [ {"id": "A", "u": 10, "v": 10, "c": 5}, ... ],
//     "cost": {"type": "piecewise_linear", "l": 0.5, "k": 2, "w": 1},
//          or {"type": "power", "alpha": 1, "gamma": 2},
//     "solver": {"tolerance": 1e-10},                       (optional)
//     "grid": {"price_step": 0.01, "price_min": 0, "price_max": 20,
//              "max_menu_size": 3, "include_analytic_prices": false}   (optional)
//   }
//
// Unknown keys are rejected so that typos surface as errors.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "selfcontrol/model.hpp"
#include "selfcontrol/oracle.hpp"

namespace selfcontrol {

/// Unreadable file, malformed JSON or a schema violation. The message carries
/// the source name plus a line:column or a JSON path.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct InstanceFile {
    ProblemInstance instance;
    std::optional<double> tolerance;
    std::optional<GridSpec> grid;
};

InstanceFile parse_instance(std::string_view text, std::string_view source = "<input>");
InstanceFile load_instance(const std::filesystem::path& path);

std::string serialize_instance(const InstanceFile& file);

}  // namespace selfcontrol
