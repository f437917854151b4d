#ifndef FPRW_MODEL_IO_HPP
#define FPRW_MODEL_IO_HPP

#include <string>

#include "fprw/errors.hpp"
#include "fprw/model.hpp"

namespace fprw {

// Model spec document: fields alpha, factor1, factor2, optional claims.
// Factors carry size, root, matrix (row-major), optional labels. Unknown
// fields are rejected.
ModelSpec parse_model(const std::string& json_text);
ModelSpec load_model(const std::string& path);

std::string serialize_model(const ModelSpec& spec);
void save_model(const ModelSpec& spec, const std::string& path);

}  // namespace fprw

#endif
