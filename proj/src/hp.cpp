#include "schottkykit/hp.hpp"

#include <cstdlib>

namespace skt {

std::string HPReal::str(int digits) const {
    if (digits < 2) digits = 2;
    char* buf = nullptr;
    if (mpfr_asprintf(&buf, "%.*Re", digits - 1, v_) < 0) throw std::runtime_error("HPReal::str: format failed");
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
}

}  // namespace skt
