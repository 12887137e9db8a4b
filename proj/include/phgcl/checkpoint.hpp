#pragma once

#include "phgcl/model.hpp"

#include <string>
#include <vector>

namespace phgcl {

// Model snapshot persisted as a versioned named-tensor archive, with the
// optimizer moments riding along when training is meant to resume.
struct Checkpoint {
    ModelParams params;
    bool has_adam = false;
    long adam_step = 0;
    std::vector<Matrix> adam_m;  // aligned with params.roster()
    std::vector<Matrix> adam_v;
};

void save_checkpoint(const Checkpoint& ck, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace phgcl
