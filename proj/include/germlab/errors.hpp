#pragma once

#include <stdexcept>
#include <string>

namespace germlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define GERMLAB_ERROR(Name)                                  \
  struct Name : Error {                                      \
    explicit Name(const std::string& what) : Error(what) {}  \
  }

GERMLAB_ERROR(DivisionByZero);
GERMLAB_ERROR(InsufficientPrecision);
GERMLAB_ERROR(AmbiguousNilpotent);
GERMLAB_ERROR(OutsideDomain);
GERMLAB_ERROR(SpecMismatch);
GERMLAB_ERROR(BallTooSmall);
GERMLAB_ERROR(NotRegular);
GERMLAB_ERROR(TailUnstable);
GERMLAB_ERROR(GridTooLarge);
GERMLAB_ERROR(RankDeficient);
GERMLAB_ERROR(InconsistentSystem);
GERMLAB_ERROR(PoolDeficient);
GERMLAB_ERROR(ParseError);

#undef GERMLAB_ERROR

}  // namespace germlab
