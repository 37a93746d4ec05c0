#pragma once

#include <stdexcept>
#include <string>

namespace qcluster {

// All library failures derive from Error. Identity violations (a division that
// should be exact but is not, a mutation matrix that differs from the expected
// one) are reported by throwing; they are never downgraded to warnings.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QCLUSTER_DEFINE_ERROR(Name)          \
  class Name : public Error {                \
   public:                                   \
    using Error::Error;                      \
  }

QCLUSTER_DEFINE_ERROR(InvalidType);
QCLUSTER_DEFINE_ERROR(RingMismatch);
QCLUSTER_DEFINE_ERROR(ArityMismatch);
QCLUSTER_DEFINE_ERROR(NotDivisible);
QCLUSTER_DEFINE_ERROR(ExponentOverflow);
QCLUSTER_DEFINE_ERROR(NonInvertibleSubstitution);
QCLUSTER_DEFINE_ERROR(IndexOutOfRange);
QCLUSTER_DEFINE_ERROR(NonCommutingSet);
QCLUSTER_DEFINE_ERROR(ScheduleMismatch);
QCLUSTER_DEFINE_ERROR(Mismatch);
QCLUSTER_DEFINE_ERROR(NotAdjacent);
QCLUSTER_DEFINE_ERROR(SingularBoundary);
QCLUSTER_DEFINE_ERROR(NoSolution);
QCLUSTER_DEFINE_ERROR(DivisibilityFailure);
QCLUSTER_DEFINE_ERROR(PolynomialityFailure);
QCLUSTER_DEFINE_ERROR(WindowEdge);
QCLUSTER_DEFINE_ERROR(InvalidWindow);
QCLUSTER_DEFINE_ERROR(ParseError);

#undef QCLUSTER_DEFINE_ERROR

}  // namespace qcluster
