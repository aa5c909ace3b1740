"""In-process registry of courses and tutorials.

Course material is configuration, not user data: it is loaded from tutorial
files at startup or uploaded by teachers, and held in memory. User state and
submission history live in the store.
"""

from __future__ import annotations

import threading
from dataclasses import replace

from ..tutorial import Course, Tutorial


class RegistryError(Exception):
    pass


class NotFound(RegistryError):
    pass


class CourseRegistry:
    def __init__(self) -> None:
        self._lock = threading.RLock()
        self._courses: dict[str, Course] = {}
        self._tutorials: dict[str, Tutorial] = {}

    # -- courses -----------------------------------------------------------

    def create_course(self, course: Course) -> None:
        with self._lock:
            if course.id in self._courses:
                raise RegistryError(f"course {course.id!r} already exists")
            self._courses[course.id] = course

    def update_course(self, course: Course) -> None:
        with self._lock:
            if course.id not in self._courses:
                raise NotFound(course.id)
            self._courses[course.id] = course

    def course(self, course_id: str) -> Course:
        with self._lock:
            course = self._courses.get(course_id)
        if course is None:
            raise NotFound(course_id)
        return course

    def list_courses(self) -> list[Course]:
        with self._lock:
            return sorted(self._courses.values(), key=lambda c: c.id)

    def enroll(self, course_id: str, user_ids: set[str]) -> Course:
        with self._lock:
            course = self.course(course_id)
            updated = replace(course, roster=frozenset(course.roster | user_ids))
            self._courses[course_id] = updated
            return updated

    def set_profile(self, course_id: str, profile_id: str) -> Course:
        with self._lock:
            course = self.course(course_id)
            updated = replace(course, profile_id=profile_id)
            self._courses[course_id] = updated
            return updated

    def largest_roster(self) -> int:
        with self._lock:
            return max((len(c.roster) for c in self._courses.values()), default=0)

    # -- tutorials -----------------------------------------------------------

    def add_tutorial(self, course_id: str, tutorial: Tutorial) -> None:
        with self._lock:
            course = self.course(course_id)
            self._tutorials[tutorial.id] = tutorial
            if tutorial.id not in course.tutorial_ids:
                self._courses[course_id] = replace(
                    course, tutorial_ids=course.tutorial_ids + (tutorial.id,)
                )

    def tutorial(self, tutorial_id: str) -> Tutorial:
        with self._lock:
            tutorial = self._tutorials.get(tutorial_id)
        if tutorial is None:
            raise NotFound(tutorial_id)
        return tutorial

    def course_of_tutorial(self, tutorial_id: str) -> Course:
        with self._lock:
            for course in self._courses.values():
                if tutorial_id in course.tutorial_ids:
                    return course
        raise NotFound(tutorial_id)

    def is_enrolled(self, course: Course, user_id: str) -> bool:
        return user_id in course.roster

    def is_owner(self, course: Course, user_id: str) -> bool:
        return course.owner_id == user_id
