int main() {
    int a;
    int b;
    int t;
    int i;
    a = 0;
    b = 1;
    for (i = 0; i < 15; i = i + 1) {
        t = a + b;
        a = b;
        b = t;
    }
    return a;
}
