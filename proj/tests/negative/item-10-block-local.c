int main() {
    int x;
    x = 1;
    if (x) {
        int y;
        y = 2;
        x = y;
    }
    return x;
}
