#pragma once

#include <stdexcept>
#include <string>

namespace totalk {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define TOTALK_ERROR(Name)        \
  struct Name : Error {           \
    using Error::Error;           \
  }

TOTALK_ERROR(DomainMismatch);
TOTALK_ERROR(InfiniteGroup);
TOTALK_ERROR(BoundExceeded);
TOTALK_ERROR(OwnerMismatch);
TOTALK_ERROR(ShapeMismatch);
TOTALK_ERROR(UnsupportedKind);
TOTALK_ERROR(Undecidable);
TOTALK_ERROR(IllDefined);
TOTALK_ERROR(BoundMismatch);
TOTALK_ERROR(UnknownFixture);
TOTALK_ERROR(OutOfRange);
TOTALK_ERROR(InputError);
TOTALK_ERROR(SemanticError);

#undef TOTALK_ERROR

struct ParseError : Error {
  ParseError(const std::string& what, long line, long column)
      : Error(what), line(line), column(column) {}
  long line;
  long column;
};

}  // namespace totalk
