int f29(int a)
{
    int arr[] = {
    1, 2, 3
    };
    a = arr[0];
    a = arr[1];
    a = arr[2];
    return a;
}
