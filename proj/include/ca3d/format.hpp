// Numeric formatting shared by every CSV writer: 9 significant digits,
// shortest form ("%.9g"), deterministic for identical inputs.

#ifndef CA3D_FORMAT_HPP
#define CA3D_FORMAT_HPP

#include <cstdio>
#include <string>

namespace ca3d {

inline std::string g9(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

} // namespace ca3d

#endif // CA3D_FORMAT_HPP
