#ifndef PSSV_VERSION_HPP
#define PSSV_VERSION_HPP

namespace pssv {

inline constexpr const char* kVersion = "0.1.0";

} // namespace pssv

#endif
