#pragma once

#include "fastlip/classify.hpp"
#include "fastlip/core.hpp"
#include "fastlip/cost.hpp"
#include "fastlip/figures.hpp"
#include "fastlip/finite_difference.hpp"
#include "fastlip/interference.hpp"
#include "fastlip/io.hpp"
#include "fastlip/logdomain.hpp"
#include "fastlip/oracle.hpp"
#include "fastlip/qualifiers.hpp"
#include "fastlip/sampling.hpp"
#include "fastlip/smoothing.hpp"
#include "fastlip/solver.hpp"
#include "fastlip/special.hpp"
#include "fastlip/zoo.hpp"
