#pragma once

#include "curvem/driver.hpp"
