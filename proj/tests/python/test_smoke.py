import c2m

SRC = """
int add(int a, int b) {
    return a + b;
}
int main() {
    int s;
    int i;
    s = 0;
    for (i = 0; i < 4; i = i + 1) {
        s = add(s, i);
    }
    return s;
}
"""


def test_translate():
    out = c2m.translate(SRC)
    assert out["ok"]
    assert "while" in out["translated"]
    assert "RVal" in out["translated"]


def test_run_c():
    r = c2m.run_c(SRC)
    assert r["status"] == "exit"
    assert r["exit_code"] == 6


def test_run_translated():
    text = c2m.translate(SRC)["translated"]
    r = c2m.run_m(text)
    assert r["status"] == "exit"
    assert r["exit_code"] == 6


def test_diff():
    v = c2m.diff(SRC)
    assert v["ok"]
    assert v["verdict"] == "equivalent"


def test_diff_rejects_bad_input():
    v = c2m.diff("int main( {")
    assert not v["ok"]
    assert v["diagnostics"]


def test_extern_trace():
    src = """
    extern int sense(void);
    int main() {
        int x;
        x = sense() + sense();
        return x;
    }
    """
    v = c2m.diff(src, externs='{"sense": {"returns": [4, 5]}}')
    assert v["ok"]
    r = c2m.run_c(src, externs='{"sense": {"returns": [4, 5]}}')
    assert r["exit_code"] == 9
    assert len(r["trace"]) == 2
