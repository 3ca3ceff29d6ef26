#include "goldenrule/errors.hpp"

namespace goldenrule {

void throw_domain(const std::string& where, const std::string& what)
{
    throw DomainError(where + ": " + what);
}

}  // namespace goldenrule
