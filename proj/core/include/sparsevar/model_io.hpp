#pragma once

#include <filesystem>
#include <string>

#include "sparsevar/var_model.hpp"

namespace sparsevar {

// JSON layout:
//   { "p": int, "names": [..], "A": [[row]...] (K rows of K p),
//     "sigma_u": [[..]..], "rho": [..] | null,
//     "stats": {"means": [..], "sds": [..]},
//     "solver": {"estimator": str, "lambda": x, "sweeps": n, "converged": bool} }
// Extra top-level keys are preserved by readers as ignorable metadata.
std::string model_to_json(const VarModel& model, int indent = 2);
VarModel model_from_json(const std::string& text);

void write_model(const std::filesystem::path& path, const VarModel& model);
VarModel read_model(const std::filesystem::path& path);

}  // namespace sparsevar
