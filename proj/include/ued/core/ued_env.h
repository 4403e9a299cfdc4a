// Copyright 2026 The UED Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <span>
#include <vector>

#include "ued/common/errors.h"
#include "ued/core/batch_env.h"
#include "ued/core/env.h"

namespace ued {

/// A teacher environment whose finished episodes decode to student levels.
template <class T, class Level>
concept DesignEnvironment =
    Environment<T> && requires(const T& t, const typename T::State& s) {
      { t.is_complete(s) } -> std::convertible_to<bool>;
      { t.decode(s) } -> std::convertible_to<Level>;
    };

template <class S, class Level>
concept LevelSettableEnvironment =
    Environment<S> && requires(const S& env, const Level& level) {
      { env.reset_to_level(level) } -> std::same_as<typename S::Result>;
    };

/// Shared teacher/student interface: the teacher steps through its design
/// MDP, then reset_student() instantiates the designed level for the student.
template <class Student, class Teacher, class Level>
  requires LevelSettableEnvironment<Student, Level> &&
           DesignEnvironment<Teacher, Level>
class UedEnv {
 public:
  using StudentResult = typename Student::Result;
  using TeacherResult = typename Teacher::Result;
  using TeacherState = typename Teacher::State;

  UedEnv(Student student, Teacher teacher, BatchShape shape)
      : student_(std::move(student), shape), teacher_(std::move(teacher), shape) {}

  const BatchEnv<Student>& student() const { return student_; }
  const BatchEnv<Teacher>& teacher() const { return teacher_; }

  std::vector<TeacherResult> reset_teacher(Rng rng) const {
    return teacher_.reset(rng);
  }

  std::vector<TeacherResult> step_teacher(
      Rng rng, std::span<const TeacherState> states,
      std::span<const int> actions) const {
    return teacher_.step(rng, states, actions);
  }

  StudentResult reset_student(const TeacherState& teacher_final) const {
    if (!teacher_.env().is_complete(teacher_final)) {
      throw ContractViolation("reset_student before the design finished");
    }
    return student_.env().reset_to_level(teacher_.env().decode(teacher_final));
  }

  std::vector<StudentResult> reset_student(
      std::span<const TeacherState> teacher_final) const {
    std::vector<StudentResult> out;
    out.reserve(teacher_final.size());
    for (const auto& t : teacher_final) out.push_back(reset_student(t));
    return out;
  }

 private:
  BatchEnv<Student> student_;
  BatchEnv<Teacher> teacher_;
};

}  // namespace ued
