int main() {
    int x;
    int y;
    x = (1, 2);
    y = x;
    return y;
}
