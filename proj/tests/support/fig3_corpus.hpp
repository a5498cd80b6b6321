#pragma once

// The two-class demo program, its three tests, and the four follow-up
// versions used across the unit and acceptance suites.

namespace fig3 {

inline constexpr const char *kV0 = R"(class A {
    void foo() {
    }
    void bar(Object obj) {
    }
}

class B extends A {
    void foo() {
    }
}
)";

// B.bar(Object) added: overrides A.bar(Object).
inline constexpr const char *kV1 = R"(class A {
    void foo() {
    }
    void bar(Object obj) {
    }
}

class B extends A {
    void foo() {
    }
    void bar(Object obj) {
    }
}
)";

// A.bar(String) added: overloads A.bar(Object).
inline constexpr const char *kV2 = R"(class A {
    void foo() {
    }
    void bar(Object obj) {
    }
    void bar(String text) {
    }
}

class B extends A {
    void foo() {
    }
    void bar(Object obj) {
    }
}
)";

// B.foo() body changed.
inline constexpr const char *kV3 = R"(class A {
    void foo() {
    }
    void bar(Object obj) {
    }
    void bar(String text) {
    }
}

class B extends A {
    void foo() {
        bar("hello");
    }
    void bar(Object obj) {
    }
}
)";

// A.foo() removed.
inline constexpr const char *kV4 = R"(class A {
    void bar(Object obj) {
    }
    void bar(String text) {
    }
}

class B extends A {
    void foo() {
        bar("hello");
    }
    void bar(Object obj) {
    }
}
)";

inline constexpr const char *kTests = R"(// T1
test1() {
    A a = new A();
    a.foo();
}

// T2
test2() {
    A a = new B();
    a.foo();
}

// T3
test3() {
    A a = new B();
    a.bar("hello");
}
)";

} // namespace fig3
