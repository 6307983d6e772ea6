#include "dwellclick/error.hpp"

namespace dwell {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::io: return "io";
        case ErrorKind::schema: return "schema";
        case ErrorKind::contract: return "contract";
        case ErrorKind::insufficient_data: return "insufficient_data";
        case ErrorKind::fit_failure: return "fit_failure";
        case ErrorKind::undefined_pivot: return "undefined_pivot";
        case ErrorKind::validation: return "validation";
        case ErrorKind::lookup: return "lookup";
    }
    return "unknown";
}

}  // namespace dwell
