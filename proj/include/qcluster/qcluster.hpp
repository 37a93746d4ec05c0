#pragma once

#include "cartan.hpp"
#include "cluster.hpp"
#include "coefficients.hpp"
#include "errors.hpp"
#include "krpoint.hpp"
#include "laurent.hpp"
#include "matrix.hpp"
#include "qsystem.hpp"
#include "serialize.hpp"
#include "tsystem.hpp"
#include "verify.hpp"
