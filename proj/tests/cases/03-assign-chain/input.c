int main() {
    int a;
    int b;
    int c;
    a = 2;
    b = a + 3;
    c = a * b;
    b = c - a;
    return a + b + c;
}
