// Copyright (c) 2026 the szzkit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace szz {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

#define SZZ_DEFINE_ERROR(Name)                                                \
    class Name final : public Error {                                         \
      public:                                                                 \
        using Error::Error;                                                   \
    }

SZZ_DEFINE_ERROR(NotARepo);
SZZ_DEFINE_ERROR(EmptyRepo);
SZZ_DEFINE_ERROR(UnknownCommit);
SZZ_DEFINE_ERROR(NoSuchPathAtCommit);
SZZ_DEFINE_ERROR(LineOutOfRange);
SZZ_DEFINE_ERROR(RangeInvalid);
SZZ_DEFINE_ERROR(MalformedPartial);
SZZ_DEFINE_ERROR(AmbiguousRef);
SZZ_DEFINE_ERROR(ScriptInvalid);
SZZ_DEFINE_ERROR(IoFailure);
SZZ_DEFINE_ERROR(GitCommandFailed);
SZZ_DEFINE_ERROR(LineNotRemovedByFix);
SZZ_DEFINE_ERROR(MismatchedFix);
SZZ_DEFINE_ERROR(MissingContext);
SZZ_DEFINE_ERROR(PreconditionViolated);
SZZ_DEFINE_ERROR(DegenerateVariance);
SZZ_DEFINE_ERROR(UnparsableFile);

#undef SZZ_DEFINE_ERROR

}  // namespace szz
