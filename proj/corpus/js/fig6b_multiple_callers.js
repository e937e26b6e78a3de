function changeDisplayStuffs(kind) {
  var url = "https://api.instagram.com/v1/users/" + userId + "/" + kind;
  $.ajax({url: url, type: "GET", dataType: "jsonp", success: draw});
}

$("#photos").click(function () {
  changeDisplayStuffs("media/recent");
});
$("#profile").click(function () { changeDisplayStuffs(""); });
