#include "flowparts/types.hpp"

namespace flowparts {

namespace {
constexpr const char* kJointNames[kJointCount] = {
    "face", "shoulder_mid", "belly", "hip_mid", "knee_mid", "ankle_mid",
};
}

const char* joint_name(Joint j) { return kJointNames[static_cast<int>(j)]; }

std::optional<Joint> joint_from_name(const std::string& name) {
  for (int i = 0; i < kJointCount; ++i) {
    if (name == kJointNames[i]) return static_cast<Joint>(i);
  }
  return std::nullopt;
}

}  // namespace flowparts
