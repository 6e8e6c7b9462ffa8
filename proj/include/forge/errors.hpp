#pragma once

#include <stdexcept>
#include <string>

namespace forge {

class ForgeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FORGE_DEFINE_ERROR(Name)                 \
  class Name : public ForgeError {               \
   public:                                       \
    explicit Name(const std::string& what)       \
        : ForgeError(#Name ": " + what) {}       \
  }

FORGE_DEFINE_ERROR(BudgetExceeded);
FORGE_DEFINE_ERROR(MalformedWord);
FORGE_DEFINE_ERROR(MismatchedAmbient);
FORGE_DEFINE_ERROR(MonomorphismUnverified);
FORGE_DEFINE_ERROR(StableLetterCollision);
FORGE_DEFINE_ERROR(StabilizerNotContained);
FORGE_DEFINE_ERROR(GroupMismatch);
FORGE_DEFINE_ERROR(NotAStabilizer);
FORGE_DEFINE_ERROR(FixedPointViolation);
FORGE_DEFINE_ERROR(SameOrbitViolation);
FORGE_DEFINE_ERROR(ProvenanceMissing);
FORGE_DEFINE_ERROR(NotNeighbors);
FORGE_DEFINE_ERROR(CombinatorialBlowup);
FORGE_DEFINE_ERROR(WindowTooSmall);
FORGE_DEFINE_ERROR(SubPresentationUnverified);
FORGE_DEFINE_ERROR(KLNotDistinct);
FORGE_DEFINE_ERROR(CapBound);
FORGE_DEFINE_ERROR(InvalidSpec);
FORGE_DEFINE_ERROR(IOError);

#undef FORGE_DEFINE_ERROR

}  // namespace forge
