int main() {
    int x;
    x = 1;
    x = ++x;
    return x;
}
