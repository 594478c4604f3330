#ifndef GFRSIM_VERSION_H
#define GFRSIM_VERSION_H

namespace gfrsim {

constexpr const char* kToolName = "gfrsim";
constexpr const char* kToolVersion = "0.1.0";

}  // namespace gfrsim

#endif
